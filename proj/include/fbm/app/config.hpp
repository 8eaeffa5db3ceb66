#pragma once

#include "fbm/core/errors.hpp"
#include "fbm/core/params.hpp"
#include "fbm/core/random.hpp"
#include "fbm/core/snapshot.hpp"
#include "fbm/experiments/data.hpp"
#include "fbm/experiments/report.hpp"
#include "fbm/experiments/selfsim.hpp"
#include "fbm/experiments/stability.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/etd.hpp"
#include "fbm/solver/picard.hpp"
#include "fbm/symbols/catalog.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fbm {

using nlohmann::json;

struct IcConfig {
    std::string type = "truncated_homogeneous"; // truncated_homogeneous | gaussian | single_mode | random_band | file
    double delta = 0.1;
    double R1 = 0.0;
    std::string mode = "lowpass";
    double amplitude = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
    double width = 0.5;
    Wavevector k{1, 0, 0};
    double band_lo = 1.0;
    double band_hi = 4.0;
    double decay = 0.0;
    double fn_norm = 0.0; // > 0 rescales the data to this FN norm
    std::filesystem::path path;
    bool add_to_theta = true; // ic_phi only: phi0 = theta0 + this field
};

struct RunConfig {
    int n = 2;
    double gamma = 0.8;
    double beta = 0.0;
    SymbolSpec symbol;
    int N = 64;
    double L = 2.0 * std::numbers::pi;
    NormParams norm{2.0, 0.0, infinity, 0.0};
    bool s_auto = true;
    MorreySearch search;
    std::string method = "etd"; // etd | picard
    TimeStepConfig time;
    FixedPointConfig picard;
    int picard_nodes = 16;
    IcConfig ic;
    IcConfig ic_phi;
    bool has_ic_phi = false;
    SelfSimConfig selfsim;
    StabilityConfig stability;
    int k_trials = 100;
    std::uint64_t seed = 1;
    std::filesystem::path output = "runs";
    std::vector<std::string> warnings;
    json source; // the document as read

    Grid grid() const { return Grid(n, N, L); }
    FnNorm make_norm() const { return FnNorm(DyadicPartition(grid()), norm, search); }
    CouplingSymbol make_coupling() const { return make_symbol(symbol, grid()); }
};

namespace detail {

inline void reject_unknown(const json& obj, const std::string& section, std::initializer_list<const char*> keys) {
    if (!obj.is_object())
        throw config_error("'" + section + "' must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k))
            throw config_error("unknown key '" + (section.empty() ? k : section + "." + k) + "'");
}

inline std::string key_name(const std::string& section, const char* key) {
    return section.empty() ? key : section + "." + key;
}

inline double get_number(const json& obj, const std::string& section, const char* key, double fallback,
                         bool allow_inf = false) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (v.is_number())
        return v.get<double>();
    if (allow_inf && v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity"))
        return infinity;
    throw config_error("'" + key_name(section, key) + "' must be a number" + (allow_inf ? " or \"inf\"" : ""));
}

inline double require_number(const json& obj, const std::string& section, const char* key) {
    if (!obj.contains(key))
        throw config_error("missing required key '" + key_name(section, key) + "'");
    return get_number(obj, section, key, 0.0);
}

inline std::optional<double> get_optional(const json& obj, const std::string& section, const char* key) {
    if (!obj.contains(key))
        return std::nullopt;
    return get_number(obj, section, key, 0.0);
}

inline int get_int(const json& obj, const std::string& section, const char* key, int fallback) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw config_error("'" + key_name(section, key) + "' must be an integer");
    return v.get<int>();
}

inline std::string get_string(const json& obj, const std::string& section, const char* key, const std::string& fallback) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_string())
        throw config_error("'" + key_name(section, key) + "' must be a string");
    return v.get<std::string>();
}

inline bool get_bool(const json& obj, const std::string& section, const char* key, bool fallback) {
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_boolean())
        throw config_error("'" + key_name(section, key) + "' must be true or false");
    return v.get<bool>();
}

template <class T, std::size_t M>
std::array<T, 3> get_triple(const json& obj, const std::string& section, const char* key, std::array<T, M> fallback) {
    std::array<T, 3> out{};
    for (std::size_t i = 0; i < M && i < 3; ++i)
        out[i] = fallback[i];
    if (!obj.contains(key))
        return out;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() > 3 || v.empty())
        throw config_error("'" + key_name(section, key) + "' must be an array of 1 to 3 numbers");
    out = {};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw config_error("'" + key_name(section, key) + "' must contain numbers");
        out[i] = v[i].get<T>();
    }
    return out;
}

inline std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    return std::filesystem::absolute(p.is_absolute() || base.empty() ? p : base / p);
}

inline IcConfig parse_ic(const json& j, const std::string& section, const std::filesystem::path& base) {
    reject_unknown(j, section,
                   {"type", "delta", "R1", "mode", "amplitude", "center", "width", "k", "band_lo", "band_hi", "decay",
                    "fn_norm", "path", "add_to_theta"});
    IcConfig ic;
    ic.type = get_string(j, section, "type", ic.type);
    static const std::set<std::string> types{"truncated_homogeneous", "gaussian", "single_mode", "random_band", "file"};
    if (!types.count(ic.type))
        throw config_error("'" + section + ".type' must be one of truncated_homogeneous, gaussian, single_mode, "
                           "random_band, file (got '" + ic.type + "')");
    ic.delta = get_number(j, section, "delta", ic.delta);
    ic.R1 = get_number(j, section, "R1", ic.R1);
    ic.mode = get_string(j, section, "mode", ic.mode);
    ic.amplitude = get_number(j, section, "amplitude", ic.amplitude);
    ic.center = get_triple<double>(j, section, "center", ic.center);
    ic.width = get_number(j, section, "width", ic.width);
    ic.k = get_triple<int>(j, section, "k", ic.k);
    ic.band_lo = get_number(j, section, "band_lo", ic.band_lo);
    ic.band_hi = get_number(j, section, "band_hi", ic.band_hi);
    ic.decay = get_number(j, section, "decay", ic.decay);
    ic.fn_norm = get_number(j, section, "fn_norm", ic.fn_norm);
    ic.add_to_theta = get_bool(j, section, "add_to_theta", ic.add_to_theta);
    if (j.contains("path"))
        ic.path = resolve(get_string(j, section, "path", ""), base);
    if (ic.type == "file" && ic.path.empty())
        throw config_error("missing required key '" + section + ".path' for type file");
    if (ic.type == "truncated_homogeneous" && !(ic.R1 > 0.0))
        throw config_error("missing required key '" + section + ".R1' for type truncated_homogeneous");
    if (ic.fn_norm < 0.0)
        throw config_error("'" + section + ".fn_norm' must be >= 0");
    return ic;
}

inline json ic_to_json(const IcConfig& ic) {
    json j{{"type", ic.type},       {"delta", ic.delta},     {"R1", ic.R1},
           {"mode", ic.mode},       {"amplitude", ic.amplitude}, {"center", ic.center},
           {"width", ic.width},     {"k", ic.k},             {"band_lo", ic.band_lo},
           {"band_hi", ic.band_hi}, {"decay", ic.decay},     {"fn_norm", ic.fn_norm},
           {"add_to_theta", ic.add_to_theta}};
    if (!ic.path.empty())
        j["path"] = ic.path.string();
    return j;
}

inline json number_or_inf(double v) { return std::isinf(v) ? json("inf") : json(v); }

} // namespace detail

//
// Parses a run configuration. Relative file paths resolve against `base`
// (the directory holding the config). Every error names the offending key.
//
inline RunConfig parse_run_config(const json& doc, const std::filesystem::path& base = {}) {
    using namespace detail;
    reject_unknown(doc, "",
                   {"model", "symbol", "grid", "norm", "time", "picard", "ic", "ic_phi", "selfsim", "stability",
                    "estimate_k", "seed", "output"});
    RunConfig c;
    c.source = doc;

    const json empty = json::object();
    const json& model = doc.contains("model") ? doc.at("model") : empty;
    reject_unknown(model, "model", {"n", "gamma", "beta", "kappa"});
    c.n = get_int(model, "model", "n", c.n);
    if (c.n < 1 || c.n > 3)
        throw config_error("'model.n' must be 1, 2 or 3");
    c.gamma = require_number(model, "model", "gamma");
    if (!(c.gamma > 0.0))
        throw config_error("'model.gamma' must be > 0");
    if (get_number(model, "model", "kappa", 1.0) != 1.0)
        throw config_error("'model.kappa' is fixed to 1");

    const json& sym = doc.contains("symbol") ? doc.at("symbol") : empty;
    reject_unknown(sym, "symbol", {"name", "alpha", "beta", "chi", "paths", "homogeneous"});
    c.symbol.name = get_string(sym, "symbol", "name", c.symbol.name);
    c.symbol.alpha = get_optional(sym, "symbol", "alpha");
    c.symbol.beta = get_optional(sym, "symbol", "beta");
    if (!c.symbol.beta && model.contains("beta"))
        c.symbol.beta = get_number(model, "model", "beta", 0.0);
    c.symbol.chi = get_optional(sym, "symbol", "chi");
    c.symbol.homogeneous = get_bool(sym, "symbol", "homogeneous", false);
    if (sym.contains("paths")) {
        if (!sym.at("paths").is_array())
            throw config_error("'symbol.paths' must be an array of file paths");
        for (const auto& p : sym.at("paths")) {
            if (!p.is_string())
                throw config_error("'symbol.paths' must contain strings");
            c.symbol.paths.push_back(resolve(p.get<std::string>(), base));
        }
    }

    const json& grid = doc.contains("grid") ? doc.at("grid") : empty;
    reject_unknown(grid, "grid", {"N", "L"});
    c.N = get_int(grid, "grid", "N", c.N);
    c.L = get_number(grid, "grid", "L", c.L);
    try {
        (void)c.grid();
    } catch (const error& e) {
        throw config_error(std::string("grid: ") + e.what());
    }
    // the symbol fixes beta; built once here so errors surface at parse time
    try {
        c.beta = c.make_coupling().beta();
    } catch (const catalog_error&) {
        throw;
    } catch (const error& e) {
        throw config_error(e.what());
    }

    const json& norm = doc.contains("norm") ? doc.at("norm") : empty;
    reject_unknown(norm, "norm", {"p", "mu", "q", "s", "stride", "margin", "max_level"});
    c.norm.p = get_number(norm, "norm", "p", c.norm.p, true);
    c.norm.mu = get_number(norm, "norm", "mu", c.norm.mu);
    c.norm.q = get_number(norm, "norm", "q", c.norm.q, true);
    c.s_auto = !norm.contains("s") || (norm.at("s").is_string() && norm.at("s").get<std::string>() == "auto");
    if (!c.s_auto)
        c.norm.s = get_number(norm, "norm", "s", 0.0);
    c.search.stride = get_int(norm, "norm", "stride", c.search.stride);
    c.search.margin = get_int(norm, "norm", "margin", c.search.margin);
    c.search.max_level = get_int(norm, "norm", "max_level", c.search.max_level);
    const double s_crit = critical_s(c.n, c.gamma, c.beta, c.norm.p, c.norm.mu);
    if (c.s_auto)
        c.norm.s = s_crit;
    try {
        c.norm.validate(c.n);
        validate_search(c.search);
    } catch (const error& e) {
        throw config_error(e.what());
    }
    const auto region = check_well_posedness_region(c.n, c.gamma, c.beta, c.norm.p, c.norm.mu);
    if (!region.ok())
        c.warnings.push_back("outside the well-posedness region: " + region.message());

    const json& time = doc.contains("time") ? doc.at("time") : empty;
    reject_unknown(time, "time", {"T", "dt", "scheme", "dealias", "record_every", "snapshot_every", "method"});
    c.time.T = get_number(time, "time", "T", c.time.T);
    c.time.dt = get_number(time, "time", "dt", c.time.dt);
    c.time.scheme = parse_scheme(get_string(time, "time", "scheme", to_string(c.time.scheme)));
    c.time.dealias = get_bool(time, "time", "dealias", c.time.dealias);
    c.time.record_every = get_int(time, "time", "record_every", c.time.record_every);
    c.time.snapshot_every = get_int(time, "time", "snapshot_every", c.time.snapshot_every);
    c.method = get_string(time, "time", "method", c.method);
    if (c.method != "etd" && c.method != "picard")
        throw config_error("'time.method' must be etd or picard (got '" + c.method + "')");
    c.time.validate();

    const json& pic = doc.contains("picard") ? doc.at("picard") : empty;
    reject_unknown(pic, "picard", {"epsilon", "K_bound", "max_iter", "tol", "nodes", "quad_nodes", "theorem_mode"});
    c.picard.epsilon = get_number(pic, "picard", "epsilon", c.picard.epsilon);
    c.picard.K_bound = get_number(pic, "picard", "K_bound", c.picard.K_bound);
    c.picard.max_iter = get_int(pic, "picard", "max_iter", c.picard.max_iter);
    c.picard.tol = get_number(pic, "picard", "tol", c.picard.tol);
    c.picard.quad_nodes = get_int(pic, "picard", "quad_nodes", c.picard.quad_nodes);
    c.picard.theorem_mode = get_bool(pic, "picard", "theorem_mode", c.picard.theorem_mode);
    c.picard.dealias = c.time.dealias;
    c.picard_nodes = get_int(pic, "picard", "nodes", c.picard_nodes);
    if (c.picard_nodes < 2)
        throw config_error("'picard.nodes' must be >= 2");
    if (c.picard.max_iter < 1)
        throw config_error("'picard.max_iter' must be >= 1");

    if (!doc.contains("ic"))
        throw config_error("missing required key 'ic'");
    c.ic = parse_ic(doc.at("ic"), "ic", base);
    c.has_ic_phi = doc.contains("ic_phi");
    if (c.has_ic_phi)
        c.ic_phi = parse_ic(doc.at("ic_phi"), "ic_phi", base);

    const json& ss = doc.contains("selfsim") ? doc.at("selfsim") : empty;
    reject_unknown(ss, "selfsim",
                   {"pairs", "dt", "band_lo", "band_hi", "tolerance", "baseline_tolerance", "allow_nonhomogeneous"});
    if (ss.contains("pairs")) {
        c.selfsim.pairs.clear();
        if (!ss.at("pairs").is_array())
            throw config_error("'selfsim.pairs' must be an array of {t1, m} objects");
        for (const auto& p : ss.at("pairs")) {
            reject_unknown(p, "selfsim.pairs[]", {"t1", "m"});
            c.selfsim.pairs.push_back({require_number(p, "selfsim.pairs[]", "t1"), get_int(p, "selfsim.pairs[]", "m", 1)});
        }
    }
    c.selfsim.dt = get_number(ss, "selfsim", "dt", c.selfsim.dt);
    c.selfsim.scheme = c.time.scheme;
    c.selfsim.dealias = c.time.dealias;
    c.selfsim.band_lo = get_number(ss, "selfsim", "band_lo", c.selfsim.band_lo);
    c.selfsim.band_hi = get_number(ss, "selfsim", "band_hi", c.selfsim.band_hi);
    c.selfsim.tolerance = get_number(ss, "selfsim", "tolerance", c.selfsim.tolerance);
    c.selfsim.baseline_tolerance = get_number(ss, "selfsim", "baseline_tolerance", c.selfsim.baseline_tolerance);
    c.selfsim.allow_nonhomogeneous = get_bool(ss, "selfsim", "allow_nonhomogeneous", false);

    const json& st = doc.contains("stability") ? doc.at("stability") : empty;
    reject_unknown(st, "stability", {"T", "auto_factor", "dt", "record_every", "fraction", "ratio_bound", "epsilon"});
    c.stability.T = get_number(st, "stability", "T", c.stability.T);
    c.stability.auto_factor = get_number(st, "stability", "auto_factor", c.stability.auto_factor);
    c.stability.dt = get_number(st, "stability", "dt", c.stability.dt);
    c.stability.scheme = c.time.scheme;
    c.stability.dealias = c.time.dealias;
    c.stability.record_every = get_int(st, "stability", "record_every", c.stability.record_every);
    c.stability.fraction = get_number(st, "stability", "fraction", c.stability.fraction);
    c.stability.ratio_bound = get_number(st, "stability", "ratio_bound", c.stability.ratio_bound);
    c.stability.epsilon = get_number(st, "stability", "epsilon", c.stability.epsilon);

    const json& ek = doc.contains("estimate_k") ? doc.at("estimate_k") : empty;
    reject_unknown(ek, "estimate_k", {"trials"});
    c.k_trials = get_int(ek, "estimate_k", "trials", c.k_trials);
    if (c.k_trials < 1)
        throw config_error("'estimate_k.trials' must be >= 1");

    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            throw config_error("'seed' must be a non-negative integer");
        c.seed = doc.at("seed").get<std::uint64_t>();
    }
    const json& out = doc.contains("output") ? doc.at("output") : empty;
    reject_unknown(out, "output", {"directory"});
    c.output = get_string(out, "output", "directory", c.output.string());
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw config_error("cannot read config file " + path.string());
    json doc;
    try {
        doc = json::parse(is, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw config_error("config " + path.string() + ": " + e.what());
    }
    // a persisted run.json or report config carries the resolved config under "config"
    if (doc.is_object() && doc.contains("config") && doc.at("config").is_object())
        doc = json(doc.at("config"));
    return parse_run_config(doc, path.parent_path());
}

// Fully resolved configuration; parse_run_config(to_json(c)) reproduces c.
inline json to_json(const RunConfig& c) {
    using detail::number_or_inf;
    json sym{{"name", c.symbol.name}, {"homogeneous", c.symbol.homogeneous}};
    if (c.symbol.alpha)
        sym["alpha"] = *c.symbol.alpha;
    if (c.symbol.beta)
        sym["beta"] = *c.symbol.beta;
    if (c.symbol.chi)
        sym["chi"] = *c.symbol.chi;
    if (!c.symbol.paths.empty()) {
        sym["paths"] = json::array();
        for (const auto& p : c.symbol.paths)
            sym["paths"].push_back(p.string());
    }
    json pairs = json::array();
    for (const auto& p : c.selfsim.pairs)
        pairs.push_back({{"t1", p.t1}, {"m", p.m}});
    json j{
        {"model", {{"n", c.n}, {"gamma", c.gamma}, {"kappa", 1.0}}},
        {"symbol", sym},
        {"grid", {{"N", c.N}, {"L", c.L}}},
        {"norm",
         {{"p", number_or_inf(c.norm.p)},
          {"mu", c.norm.mu},
          {"q", number_or_inf(c.norm.q)},
          {"s", c.s_auto ? json("auto") : json(c.norm.s)},
          {"stride", c.search.stride},
          {"margin", c.search.margin},
          {"max_level", c.search.max_level}}},
        {"time",
         {{"T", c.time.T},
          {"dt", c.time.dt},
          {"scheme", to_string(c.time.scheme)},
          {"dealias", c.time.dealias},
          {"record_every", c.time.record_every},
          {"snapshot_every", c.time.snapshot_every},
          {"method", c.method}}},
        {"picard",
         {{"epsilon", c.picard.epsilon},
          {"K_bound", c.picard.K_bound},
          {"max_iter", c.picard.max_iter},
          {"tol", c.picard.tol},
          {"nodes", c.picard_nodes},
          {"quad_nodes", c.picard.quad_nodes},
          {"theorem_mode", c.picard.theorem_mode}}},
        {"ic", detail::ic_to_json(c.ic)},
        {"selfsim",
         {{"pairs", pairs},
          {"dt", c.selfsim.dt},
          {"band_lo", c.selfsim.band_lo},
          {"band_hi", c.selfsim.band_hi},
          {"tolerance", c.selfsim.tolerance},
          {"baseline_tolerance", c.selfsim.baseline_tolerance},
          {"allow_nonhomogeneous", c.selfsim.allow_nonhomogeneous}}},
        {"stability",
         {{"T", c.stability.T},
          {"auto_factor", c.stability.auto_factor},
          {"dt", c.stability.dt},
          {"record_every", c.stability.record_every},
          {"fraction", c.stability.fraction},
          {"ratio_bound", c.stability.ratio_bound},
          {"epsilon", c.stability.epsilon}}},
        {"estimate_k", {{"trials", c.k_trials}}},
        {"seed", c.seed},
        {"output", {{"directory", c.output.string()}}},
    };
    if (c.has_ic_phi)
        j["ic_phi"] = detail::ic_to_json(c.ic_phi);
    return j;
}

inline std::string config_hash(const RunConfig& c) { return fnv1a_hex(to_json(c).dump()); }

//
// Builds one initial field. Random draws use substream(seed, stream);
// `fn_norm > 0` rescales the result to that FN norm.
//
inline SpectralField build_ic(const IcConfig& ic, const RunConfig& c, const std::string& section,
                              std::uint64_t stream) {
    const Grid grid = c.grid();
    SpectralField f(grid);
    if (ic.type == "truncated_homogeneous") {
        f = make_truncated_homogeneous_data(ic.delta, ic.R1, parse_truncation(ic.mode), grid, c.gamma, c.beta);
    } else if (ic.type == "gaussian") {
        f = gaussian_bump(grid, ic.amplitude, ic.center, ic.width);
    } else if (ic.type == "single_mode") {
        f = single_mode_field(grid, ic.k, ic.amplitude);
    } else if (ic.type == "random_band") {
        if (!(ic.band_lo >= 0.0 && ic.band_lo < ic.band_hi))
            throw config_error("'" + section + ".band_lo' must be >= 0 and below '" + section + ".band_hi'");
        Rng rng = substream(c.seed, stream);
        f = random_band_field(grid, rng, ic.band_lo, ic.band_hi, ic.decay);
        f *= ic.amplitude;
    } else {
        auto snap = read_snapshot(ic.path);
        if (!(snap.field.grid() == grid))
            throw config_error("'" + section + ".path': snapshot grid does not match grid.N/grid.L/model.n");
        f = snap.field;
    }
    if (ic.fn_norm > 0.0) {
        const double v = c.make_norm()(f);
        if (!(v > 0.0))
            throw config_error("'" + section + ".fn_norm': data have zero FN norm");
        f *= ic.fn_norm / v;
    }
    return f;
}

} // namespace fbm
