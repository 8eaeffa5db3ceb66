#pragma once

#include "fbm/experiments/rescale.hpp"
#include "fbm/experiments/report.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/etd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace fbm {

struct TimePair {
    double t1 = 0.0;
    int m = 1; // lambda = 2^m; t2 = lambda^{2 gamma} t1
};

struct SelfSimConfig {
    std::vector<TimePair> pairs{{0.005, 1}, {0.002, 2}};
    double dt = 2.5e-4;
    Scheme scheme = Scheme::etd_rk2;
    bool dealias = true;
    double band_lo = 0.0; // |xi| range of the comparison; 0 = automatic
    double band_hi = 0.0;
    double tolerance = 0.05;
    double baseline_tolerance = 1e-3;
    bool allow_nonhomogeneous = false; // contrast runs with non-homogeneous couplings
};

//
// Radial-shell-averaged relative deviation between theta(t1) and the rescaled
// lambda^{2 gamma - beta - n} theta(xi / lambda, t2) on lattice points of
// lambda Z^n with band_lo <= |xi| <= band_hi. Shells have width lambda dk; the
// result is the worst shell's sum |difference| / sum |theta(t1)|.
//
inline double selfsimilar_deviation(const SpectralField& at_t1, const SpectralField& at_t2, int m, double gamma,
                                    double beta, double band_lo, double band_hi) {
    require_same_grid(at_t1.grid(), at_t2.grid(), "selfsimilar_deviation");
    const auto& grid = at_t1.grid();
    const auto scaled = rescale_field_dyadic(at_t2, m, gamma, beta);
    const int lam = 1 << m;
    const double width = lam * grid.dk();
    std::map<long, std::pair<long double, long double>> shells;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.wavevector(i);
        bool on = true;
        for (int d = 0; d < grid.dim(); ++d)
            on = on && k[d] % lam == 0;
        const double r = grid.radius(i);
        if (!on || r == 0.0 || r < band_lo || r > band_hi)
            continue;
        auto& s = shells[static_cast<long>(std::floor(r / width))];
        s.first += std::abs(at_t1[i] - scaled[i]);
        s.second += std::abs(at_t1[i]);
    }
    if (shells.empty())
        throw config_error("selfsim: comparison band contains no lattice points");
    double worst = 0.0;
    for (const auto& [idx, s] : shells)
        if (s.second > 0.0L)
            worst = std::max(worst, static_cast<double>(s.first / s.second));
    return worst;
}

//
// Integrates truncated homogeneous data once and tests the self-similar
// form at each time pair. The linear baseline repeats the comparison on the
// exact semigroup evolution of the same data.
//
inline ExperimentReport selfsimilarity_experiment(const CouplingSymbol& P, const SpectralField& theta0, double gamma,
                                                  double R1, const SelfSimConfig& cfg, const FnNorm& norm) {
    if (cfg.pairs.empty())
        throw config_error("selfsim.pairs must not be empty");
    const auto homog = check_homogeneity(P);
    const bool homogeneous = P.homogeneous() && homog.max_deviation < 1e-8;
    if (!homogeneous && !cfg.allow_nonhomogeneous)
        throw config_error("selfsim: symbol." + P.name() +
                           " is not homogeneous (set selfsim.allow_nonhomogeneous for a contrast run)");

    const auto& grid = theta0.grid();
    int max_m = 0;
    std::vector<double> times{0.0};
    for (const auto& p : cfg.pairs) {
        if (!(p.t1 > 0.0) || p.m < 1)
            throw config_error("selfsim.pairs: need t1 > 0 and m >= 1");
        max_m = std::max(max_m, p.m);
        times.push_back(p.t1);
        times.push_back(std::pow(std::exp2(p.m), 2.0 * gamma) * p.t1);
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const double lo = cfg.band_lo > 0.0 ? cfg.band_lo : 4.0 * std::exp2(max_m) * grid.dk();
    const double hi = cfg.band_hi > 0.0 ? cfg.band_hi : 0.5 * R1;
    if (!(lo < hi))
        throw config_error("selfsim: empty comparison band (band_lo >= band_hi); increase ic.R1 or the grid size");

    const auto path = etd_path(theta0, P, gamma, cfg.scheme, cfg.dealias, cfg.dt, times);
    auto state_at = [&](double t) -> const SpectralField& {
        const auto it = std::lower_bound(times.begin(), times.end(), t);
        return path.states[static_cast<std::size_t>(it - times.begin())];
    };

    ExperimentReport rep;
    rep.id = "selfsim";
    rep.parameters = {{"symbol", P.name()}, {"gamma", gamma}, {"beta", P.beta()}, {"R1", R1},
                      {"dt", cfg.dt},       {"scheme", to_string(cfg.scheme)}, {"band_lo", lo}, {"band_hi", hi},
                      {"homogeneous", homogeneous}};
    rep.columns = {"t", "fn_norm", "l2_norm"};
    for (std::size_t i = 0; i < times.size(); ++i)
        rep.add_row({times[i], norm(path.states[i]), l2_norm(path.states[i])});

    double worst = 0.0, worst_base = 0.0;
    for (std::size_t i = 0; i < cfg.pairs.size(); ++i) {
        const auto& p = cfg.pairs[i];
        const double t2 = std::pow(std::exp2(p.m), 2.0 * gamma) * p.t1;
        const double dev = selfsimilar_deviation(state_at(p.t1), state_at(t2), p.m, gamma, P.beta(), lo, hi);
        const double base = selfsimilar_deviation(apply_semigroup(theta0, gamma, p.t1),
                                                  apply_semigroup(theta0, gamma, t2), p.m, gamma, P.beta(), lo, hi);
        const std::string tag = "pair" + std::to_string(i);
        rep.scalars[tag + "_t1"] = p.t1;
        rep.scalars[tag + "_t2"] = t2;
        rep.scalars[tag + "_lambda"] = std::exp2(p.m);
        rep.scalars[tag + "_deviation"] = dev;
        rep.scalars[tag + "_linear_baseline"] = base;
        worst = std::max(worst, dev);
        worst_base = std::max(worst_base, base);
    }
    rep.scalars["max_deviation"] = worst;
    rep.scalars["max_linear_baseline"] = worst_base;
    rep.scalars["homogeneity_defect"] = homog.max_deviation;
    rep.verdicts["baseline_clean"] = worst_base <= cfg.baseline_tolerance;
    rep.verdicts["collapse"] = worst <= cfg.tolerance;
    if (!homogeneous)
        rep.notes.push_back("contrast run: coupling is not homogeneous, collapse is not expected");
    return rep;
}

} // namespace fbm
