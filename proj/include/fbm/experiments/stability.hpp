#pragma once

#include "fbm/experiments/report.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/etd.hpp"

#include <algorithm>
#include <cmath>

namespace fbm {

struct StabilityConfig {
    double T = 0.0;          // final time; <= 0 selects it from the linear proxy
    double auto_factor = 1.25; // automatic T = factor * (first time the proxy reaches `fraction`)
    double dt = 1e-3;
    Scheme scheme = Scheme::etd_rk2;
    bool dealias = true;
    int record_every = 10;
    double fraction = 0.1;    // required decay of D and of the proxy by t = T
    double ratio_bound = 10.0; // bound on D/proxy and proxy/D along the run
    double epsilon = 0.0;     // smallness gate on both data; 0 disables
};

// ||G(t) f||_FN is non-increasing in t; first t with value <= fraction * value(0).
inline double proxy_threshold_time(const SpectralField& f, double gamma, const FnNorm& norm, double fraction) {
    const Semigroup G(f.grid(), gamma);
    const double target = fraction * norm(f);
    if (!(target > 0.0))
        return 0.0;
    double hi = 1e-3;
    while (norm(G.apply(f, hi)) > target) {
        hi *= 2.0;
        if (hi > 1e8)
            throw config_error("stability: linear proxy does not decay (data concentrated at xi = 0?)");
    }
    double lo = 0.0;
    for (int it = 0; it < 40 && hi - lo > 1e-6 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (norm(G.apply(f, mid)) > target ? lo : hi) = mid;
    }
    return hi;
}

//
// Integrates theta0 and phi0 side by side and records
//   D(t) = ||theta(t) - phi(t)||_FN   and   proxy(t) = ||G(t)(theta0 - phi0)||_FN.
// Verdict: both fall below `fraction` of their initial value by t = T and
// their ratio stays within `ratio_bound` whenever both are nonzero.
//
inline ExperimentReport stability_experiment(const SpectralField& theta0, const SpectralField& phi0,
                                             const CouplingSymbol& P, double gamma, const StabilityConfig& cfg,
                                             const FnNorm& norm) {
    require_same_grid(theta0.grid(), phi0.grid(), "stability");
    if (!(cfg.fraction > 0.0 && cfg.fraction < 1.0))
        throw config_error("stability.fraction must lie in (0, 1)");
    if (!(cfg.ratio_bound >= 1.0))
        throw config_error("stability.ratio_bound must be >= 1");
    if (cfg.epsilon > 0.0) {
        if (norm(theta0) > cfg.epsilon)
            throw config_error("stability: ||theta0||_FN exceeds stability.epsilon");
        if (norm(phi0) > cfg.epsilon)
            throw config_error("stability: ||phi0||_FN exceeds stability.epsilon");
    }

    const SpectralField diff0 = theta0 - phi0;
    double T = cfg.T;
    bool automatic = false;
    if (!(T > 0.0)) {
        T = cfg.auto_factor * proxy_threshold_time(diff0, gamma, norm, cfg.fraction);
        automatic = true;
        if (!(T > 0.0))
            T = cfg.dt;
    }
    TimeStepConfig ts{T, cfg.dt, cfg.scheme, cfg.dealias, cfg.record_every, 0};
    if (T < cfg.dt)
        ts.dt = T;
    ts.validate();

    const EtdStepper stepper(P, gamma, cfg.scheme, cfg.dealias);
    const Semigroup& G = stepper.semigroup();
    const int steps = ts.steps();
    const double h = T / steps;

    ExperimentReport rep;
    rep.id = "stability";
    rep.parameters = {{"symbol", P.name()}, {"gamma", gamma},   {"beta", P.beta()},
                      {"T", T},             {"T_automatic", automatic}, {"dt", h},
                      {"scheme", to_string(cfg.scheme)}, {"fraction", cfg.fraction},
                      {"ratio_bound", cfg.ratio_bound}};
    rep.columns = {"t", "fn_norm", "l2_norm", "diff_norm", "proxy_norm"};

    SpectralField a = theta0, b = phi0;
    double worst_ratio = 1.0;
    auto record = [&](double t) {
        const double D = norm(a - b);
        const double proxy = norm(G.apply(diff0, t));
        rep.add_row({t, norm(a), l2_norm(a), D, proxy});
        if (D > 0.0 && proxy > 0.0)
            worst_ratio = std::max({worst_ratio, D / proxy, proxy / D});
    };
    record(0.0);
    for (int s = 1; s <= steps; ++s) {
        a = stepper.step(a, h);
        b = stepper.step(b, h);
        if (s % cfg.record_every == 0 || s == steps)
            record(s * h);
    }

    const auto& first = rep.rows.front();
    const auto& last = rep.rows.back();
    const double D0 = first[3], DT = last[3], P0 = first[4], PT = last[4];
    rep.scalars["D0"] = D0;
    rep.scalars["DT"] = DT;
    rep.scalars["proxy0"] = P0;
    rep.scalars["proxyT"] = PT;
    rep.scalars["T"] = T;
    rep.scalars["max_ratio"] = worst_ratio;
    rep.verdicts["D_decay"] = DT <= cfg.fraction * D0;
    rep.verdicts["proxy_decay"] = PT <= cfg.fraction * P0;
    rep.verdicts["ratio_bounded"] = worst_ratio <= cfg.ratio_bound;
    if (D0 == 0.0)
        rep.notes.push_back("identical data: D vanishes identically");
    return rep;
}

} // namespace fbm
