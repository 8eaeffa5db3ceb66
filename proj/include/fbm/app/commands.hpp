#pragma once

#include "fbm/app/checks.hpp"
#include "fbm/app/config.hpp"
#include "fbm/experiments/estimate_k.hpp"
#include "fbm/experiments/report.hpp"
#include "fbm/experiments/selfsim.hpp"
#include "fbm/experiments/stability.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fbm {

enum ExitCode : int { exit_ok = 0, exit_verdict_fail = 1, exit_config_error = 2, exit_blowup = 3 };

struct CommandOptions {
    std::vector<std::filesystem::path> configs;
    std::filesystem::path out; // overrides output.directory when set
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    bool quiet = false;
    // estimate-k
    int trials = 0;
    // norms
    std::filesystem::path snapshot;
    double p = 2.0, mu = 0.0, q = infinity;
    std::string s = "auto";
    int stride = 4;
    // check
    int check_dim = 1;
    int check_points = 64;
};

struct CommandResult {
    int code = exit_ok;
    std::filesystem::path dir;
    std::string message;
};

namespace detail {

inline std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    localtime_r(&tt, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y%m%d-%H%M%S");
    return os.str();
}

// <root>/<timestamp>-<command>-<tag>[-i], unique across concurrent jobs
inline std::filesystem::path make_run_dir(const std::filesystem::path& root, const std::string& command,
                                          const std::string& tag) {
    static std::mutex m;
    std::lock_guard lock(m);
    const std::string base = timestamp() + "-" + command + (tag.empty() ? "" : "-" + tag);
    std::filesystem::create_directories(root);
    for (int i = 0;; ++i) {
        const auto dir = root / (i == 0 ? base : base + "-" + std::to_string(i));
        if (std::filesystem::create_directory(dir))
            return dir;
    }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream os(path);
    os << j.dump(2) << '\n';
    if (!os)
        throw error("cannot write " + path.string());
}

inline json series_json(const std::vector<NormSample>& s) {
    json t = json::array(), fn = json::array(), l2 = json::array(), mx = json::array();
    for (const auto& x : s) {
        t.push_back(x.t);
        fn.push_back(std::isfinite(x.fn_norm) ? json(x.fn_norm) : json(nullptr));
        l2.push_back(x.l2_norm);
        mx.push_back(x.max_coeff);
    }
    return {{"t", t}, {"fn_norm", fn}, {"l2_norm", l2}, {"max_coeff", mx}};
}

inline void write_series_csv(const std::filesystem::path& path, const std::vector<NormSample>& s) {
    std::ofstream os(path);
    os << "t,fn_norm,l2_norm,max_coeff\n";
    os.precision(17);
    for (const auto& x : s)
        os << x.t << ',' << x.fn_norm << ',' << x.l2_norm << ',' << x.max_coeff << '\n';
}

inline std::string snapshot_name(std::size_t i) {
    std::ostringstream os;
    os << "snap_" << std::setw(6) << std::setfill('0') << i << ".fbm";
    return os.str();
}

inline RunConfig load_for(const std::filesystem::path& path, const CommandOptions& o) {
    RunConfig c = load_run_config(path);
    if (o.seed)
        c.seed = *o.seed;
    if (!o.out.empty())
        c.output = o.out;
    return c;
}

inline void print_warnings(const RunConfig& c, const CommandOptions& o, std::ostream& err) {
    if (!o.quiet)
        for (const auto& w : c.warnings)
            err << "warning: " << w << '\n';
}

inline CommandResult finish_report(ExperimentReport rep, const RunConfig& c, const std::string& command,
                                   const CommandOptions& o, std::ostream& log) {
    rep.provenance.config_hash = config_hash(c);
    const auto dir = make_run_dir(c.output, command, rep.provenance.config_hash.substr(0, 8));
    write_report(dir, rep);
    write_json(dir / "config.json", to_json(c));
    if (!o.quiet) {
        for (const auto& [k, v] : rep.scalars)
            log << "  " << k << " = " << v << '\n';
        for (const auto& [k, v] : rep.verdicts)
            log << "  verdict " << k << ": " << (v ? "pass" : "fail") << '\n';
        for (const auto& n : rep.notes)
            log << "  note: " << n << '\n';
        log << command << ": " << (rep.passed() ? "PASS" : "FAIL") << " (" << dir.string() << ")\n";
    }
    return {rep.passed() ? exit_ok : exit_verdict_fail, dir, rep.passed() ? "pass" : "verdict failed"};
}

} // namespace detail

inline CommandResult cmd_simulate(const std::filesystem::path& config, const CommandOptions& o, std::ostream& log,
                                  std::ostream& err) {
    const RunConfig c = detail::load_for(config, o);
    detail::print_warnings(c, o, err);
    const auto theta0 = build_ic(c.ic, c, "ic", 0);
    const auto P = c.make_coupling();
    const auto norm = c.make_norm();
    const std::string hash = config_hash(c);
    const auto dir = detail::make_run_dir(c.output, "simulate", hash.substr(0, 8));

    json run{{"command", "simulate"},
             {"config", to_json(c)},
             {"provenance", {{"config_hash", hash}, {"code_version", code_version}}},
             {"warnings", c.warnings}};
    CommandResult res{exit_ok, dir, "ok"};
    std::vector<NormSample> series;
    if (c.method == "etd") {
        const auto rec = etd_run(theta0, P, c.gamma, c.time, &norm);
        series = rec.series;
        run["diagnostics"] = {{"method", "etd"},
                              {"scheme", to_string(rec.scheme)},
                              {"dt", rec.dt},
                              {"steps", rec.steps},
                              {"blowup", rec.blowup ? json{{"time", rec.blowup->time}, {"message", rec.blowup->message}}
                                                    : json(nullptr)}};
        if (!rec.snapshots.empty()) {
            std::filesystem::create_directories(dir / "snapshots");
            json names = json::array();
            for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
                write_snapshot(dir / "snapshots" / detail::snapshot_name(i), rec.snapshots[i], c.gamma, c.beta);
                names.push_back(detail::snapshot_name(i));
            }
            run["snapshots"] = names;
        }
        write_snapshot(dir / "final.fbm", rec.final_state, c.gamma, c.beta);
        if (rec.blowup)
            res = {exit_blowup, dir, rec.blowup->message};
    } else {
        auto fp = c.picard;
        const auto nodes = clustered_nodes(c.time.T, c.picard_nodes);
        const auto sol = picard_solve(theta0, P, c.gamma, fp, nodes, norm);
        for (const auto& s : sol.path.states)
            series.push_back(sample_norms(s, &norm));
        const auto& d = sol.diagnostics;
        run["diagnostics"] = {{"method", "picard"},        {"iterations", d.iterations},
                              {"converged", d.converged},  {"differences", d.differences},
                              {"ratios", d.ratios},        {"initial_norm", d.initial_norm},
                              {"sup_norm", d.sup_norm},    {"contraction_estimate", d.contraction_estimate},
                              {"warnings", d.warnings}};
        write_snapshot(dir / "final.fbm", sol.path.states.back(), c.gamma, c.beta);
        if (!d.converged)
            res = {exit_verdict_fail, dir, "picard iteration did not reach picard.tol"};
    }
    run["series"] = detail::series_json(series);
    detail::write_json(dir / "run.json", run);
    detail::write_series_csv(dir / "metrics.csv", series);
    if (!o.quiet) {
        if (!series.empty())
            log << "simulate: t=" << series.back().t << " fn_norm=" << series.back().fn_norm
                << " l2_norm=" << series.back().l2_norm << '\n';
        log << "simulate: " << (res.code == exit_ok ? "done" : res.message) << " (" << dir.string() << ")\n";
    }
    return res;
}

inline CommandResult cmd_selfsim(const std::filesystem::path& config, const CommandOptions& o, std::ostream& log,
                                 std::ostream& err) {
    const RunConfig c = detail::load_for(config, o);
    detail::print_warnings(c, o, err);
    if (c.ic.type != "truncated_homogeneous")
        throw config_error("'ic.type' must be truncated_homogeneous for selfsim");
    const auto theta0 = build_ic(c.ic, c, "ic", 0);
    auto rep = selfsimilarity_experiment(c.make_coupling(), theta0, c.gamma, c.ic.R1, c.selfsim, c.make_norm());
    return detail::finish_report(std::move(rep), c, "selfsim", o, log);
}

inline CommandResult cmd_stability(const std::filesystem::path& config, const CommandOptions& o, std::ostream& log,
                                   std::ostream& err) {
    const RunConfig c = detail::load_for(config, o);
    detail::print_warnings(c, o, err);
    if (!c.has_ic_phi)
        throw config_error("missing required key 'ic_phi' (second data set) for stability");
    const auto theta0 = build_ic(c.ic, c, "ic", 0);
    auto phi0 = build_ic(c.ic_phi, c, "ic_phi", 1);
    if (c.ic_phi.add_to_theta)
        phi0 += theta0;
    auto rep = stability_experiment(theta0, phi0, c.make_coupling(), c.gamma, c.stability, c.make_norm());
    return detail::finish_report(std::move(rep), c, "stability", o, log);
}

inline CommandResult cmd_estimate_k(const std::filesystem::path& config, const CommandOptions& o, std::ostream& log,
                                    std::ostream& err) {
    const RunConfig c = detail::load_for(config, o);
    detail::print_warnings(c, o, err);
    const int trials = o.trials > 0 ? o.trials : c.k_trials;
    const auto est = estimate_K(c.make_coupling(), c.gamma, c.make_norm(), trials, c.seed, c.time.dealias);
    const std::string hash = config_hash(c);
    const auto dir = detail::make_run_dir(c.output, "estimate-k", hash.substr(0, 8));
    json ratios = json::array();
    for (double r : est.ratios)
        ratios.push_back(std::isfinite(r) ? json(r) : json(nullptr));
    detail::write_json(dir / "k.json", {{"K_est", est.value},
                                        {"recommended_epsilon", std::isfinite(est.recommended_epsilon)
                                                                    ? json(est.recommended_epsilon)
                                                                    : json("inf")},
                                        {"trials", trials},
                                        {"seed", c.seed},
                                        {"samples", est.samples},
                                        {"skipped", est.skipped},
                                        {"ratios", ratios},
                                        {"warnings", est.warnings},
                                        {"config", to_json(c)},
                                        {"provenance", {{"config_hash", hash}, {"code_version", code_version}}}});
    if (!o.quiet) {
        for (const auto& w : est.warnings)
            err << "warning: " << w << '\n';
        log << std::setprecision(17) << "K_est = " << est.value << "\nrecommended epsilon = " << est.recommended_epsilon
            << "\n(" << dir.string() << ")\n";
    }
    return {exit_ok, dir, "ok"};
}

inline CommandResult cmd_norms(const CommandOptions& o, std::ostream& log, std::ostream&) {
    if (o.snapshot.empty())
        throw config_error("norms: --snapshot is required");
    const auto snap = read_snapshot(o.snapshot);
    const auto& f = snap.field;
    NormParams np{o.p, o.mu, o.q, 0.0};
    if (o.s == "auto") {
        np.s = critical_s(f.grid().dim(), snap.header.gamma, snap.header.beta, o.p, o.mu);
    } else {
        try {
            np.s = std::stod(o.s);
        } catch (const std::exception&) {
            throw config_error("norm.s must be a number or \"auto\" (got '" + o.s + "')");
        }
    }
    try {
        np.validate(f.grid().dim());
    } catch (const error& e) {
        throw config_error(e.what());
    }
    const FnNorm norm(DyadicPartition(f.grid()), np, MorreySearch{o.stride, 0, -1});
    const auto rep = norm.report(f);
    const auto root = o.out.empty() ? std::filesystem::path("runs") : o.out;
    const auto dir = detail::make_run_dir(root, "norms", "");
    std::ofstream csv(dir / "norms.csv");
    write_norm_csv(csv, rep);
    detail::write_json(dir / "norms.json", {{"snapshot", std::filesystem::absolute(o.snapshot).string()},
                                            {"time", snap.header.time},
                                            {"p", detail::number_or_inf(np.p)},
                                            {"mu", np.mu},
                                            {"q", detail::number_or_inf(np.q)},
                                            {"s", np.s},
                                            {"fn_norm", rep.value},
                                            {"l2_norm", l2_norm(f)}});
    if (!o.quiet)
        log << std::setprecision(17) << "fn_norm = " << rep.value << "\nl2_norm = " << l2_norm(f) << "\n("
            << dir.string() << ")\n";
    return {exit_ok, dir, "ok"};
}

inline CommandResult cmd_check(const CommandOptions& o, std::ostream& log, std::ostream&) {
    Grid grid = [&] {
        try {
            return Grid(o.check_dim, o.check_points, 2.0 * std::numbers::pi);
        } catch (const error& e) {
            throw config_error(std::string("check: ") + e.what());
        }
    }();
    const auto results = run_property_suite(grid, o.seed.value_or(1));
    const auto root = o.out.empty() ? std::filesystem::path("runs") : o.out;
    const auto dir = detail::make_run_dir(root, "check", "");
    json arr = json::array();
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed;
        arr.push_back({{"name", r.name},
                       {"value", r.value},
                       {"threshold", r.threshold},
                       {"passed", r.passed},
                       {"seconds", r.seconds}});
        if (!o.quiet)
            log << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.value << " (threshold " << r.threshold
                << ", " << std::fixed << std::setprecision(2) << r.seconds << " s)" << std::defaultfloat
                << std::setprecision(6) << '\n';
    }
    detail::write_json(dir / "check.json",
                       {{"n", o.check_dim}, {"N", o.check_points}, {"passed", ok}, {"results", arr}});
    if (!o.quiet)
        log << "check: " << (ok ? "PASS" : "FAIL") << " (" << dir.string() << ")\n";
    return {ok ? exit_ok : exit_verdict_fail, dir, ok ? "pass" : "property check failed"};
}

// Maps library exceptions onto exit codes; the message names the key or inequality.
template <class F>
CommandResult guarded(F&& f, std::ostream& err) {
    try {
        return f();
    } catch (const numerical_blowup& e) {
        err << "error: numerical blowup: " << e.what() << '\n';
        return {exit_blowup, {}, e.what()};
    } catch (const non_contraction& e) {
        err << "error: " << e.what() << '\n';
        return {exit_verdict_fail, {}, e.what()};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return {exit_config_error, {}, e.what()};
    }
}

//
// Runs `command` once per config (or once for config-free commands), up to
// `jobs` at a time, each in its own run directory. Returns the worst exit code.
//
inline int run_command(const std::string& command, const CommandOptions& o, std::ostream& log, std::ostream& err) {
    using Fn = CommandResult (*)(const std::filesystem::path&, const CommandOptions&, std::ostream&, std::ostream&);
    Fn fn = nullptr;
    if (command == "simulate")
        fn = cmd_simulate;
    else if (command == "selfsim")
        fn = cmd_selfsim;
    else if (command == "stability")
        fn = cmd_stability;
    else if (command == "estimate-k")
        fn = cmd_estimate_k;
    else if (command == "norms")
        return guarded([&] { return cmd_norms(o, log, err); }, err).code;
    else if (command == "check")
        return guarded([&] { return cmd_check(o, log, err); }, err).code;
    else {
        err << "error: unknown command '" << command << "'\n";
        return exit_config_error;
    }
    if (o.configs.empty()) {
        err << "error: " << command << " requires --config\n";
        return exit_config_error;
    }
    if (o.jobs < 1) {
        err << "error: --jobs must be >= 1\n";
        return exit_config_error;
    }

    std::vector<int> codes(o.configs.size(), exit_ok);
    std::mutex io;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < o.configs.size(); i = next++) {
            std::ostringstream l, e;
            codes[i] = guarded([&] { return fn(o.configs[i], o, l, e); }, e).code;
            std::lock_guard lock(io);
            if (o.configs.size() > 1 && !o.quiet)
                log << "[" << o.configs[i].string() << "]\n";
            log << l.str();
            err << e.str();
        }
    };
    const int threads = std::min<int>(o.jobs, static_cast<int>(o.configs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    return *std::max_element(codes.begin(), codes.end());
}

} // namespace fbm
