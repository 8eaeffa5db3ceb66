#include "fbm/app/checks.hpp"
#include "fbm/experiments/data.hpp"
#include "fbm/experiments/estimate_k.hpp"
#include "fbm/experiments/selfsim.hpp"
#include "fbm/experiments/stability.hpp"
#include "fbm/solver/etd.hpp"
#include "fbm/solver/picard.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

using namespace fbm;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

CouplingSymbol gsqg(const Grid& g, double beta) {
    SymbolSpec s;
    s.name = "gsqg";
    s.beta = beta;
    return make_symbol(s, g);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / x.size();
        my += y[i] / y.size();
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// shared configuration of the contraction and oracle-equivalence criteria
struct SmallDataRun {
    double K = 0.0;
    double epsilon = 0.0;
    PicardResult picard;
    std::vector<double> nodes;
    SpectralField theta0;
};

const SmallDataRun& small_data_run() {
    static std::optional<SmallDataRun> cached;
    if (cached)
        return *cached;
    const Grid g(2, 128, two_pi);
    const double gamma = 0.8, beta = 0.5, p = 4.0, mu = 1.0;
    const auto P = gsqg(g, beta);
    const FnNorm norm(DyadicPartition(g), NormParams{p, mu, infinity, critical_s(2, gamma, beta, p, mu)});
    const auto est = estimate_K(P, gamma, norm, 100, 2024);
    Rng rng = substream(2024, 1000);
    auto theta0 = random_band_field(g, rng, 1.0, 16.0);
    theta0 *= est.recommended_epsilon / norm(theta0);
    FixedPointConfig fp;
    fp.epsilon = est.recommended_epsilon;
    fp.K_bound = est.value;
    fp.theorem_mode = true;
    fp.max_iter = 40;
    fp.tol = 1e-10 * est.recommended_epsilon;
    auto nodes = clustered_nodes(1.0, 32);
    auto sol = picard_solve(theta0, P, gamma, fp, nodes, norm);
    cached.emplace(SmallDataRun{est.value, est.recommended_epsilon, std::move(sol), std::move(nodes), std::move(theta0)});
    return *cached;
}

Outcome partition_of_unity() {
    const double d1 = partition_unity_defect(DyadicPartition(Grid(1, 256, two_pi)));
    const double d2 = partition_unity_defect(DyadicPartition(Grid(2, 128, two_pi)));
    return {std::max(d1, d2) <= 1e-12, fmt("max defect n=1 N=256: %.2e, n=2 N=128: %.2e (tol 1e-12)", d1, d2)};
}

Outcome linear_exactness() {
    const Grid g(2, 64, two_pi);
    double worst = 0.0;
    for (double gamma : {0.6, 1.0, 1.4}) {
        Rng rng = substream(5, 0);
        auto theta0 = random_band_field(g, rng, g.dk(), g.nyquist() * g.dk());
        theta0 *= 1.0 / theta0.max_abs();
        const TimeStepConfig ts{1.0, 1e-3, Scheme::etd_rk2, true, 100, 0};
        const auto rec = etd_integrate(theta0, make_symbol(SymbolSpec{}, g), gamma, ts);
        const auto decay = Semigroup(g, gamma).decay(1.0);
        for (std::size_t i = 0; i < g.size(); ++i)
            worst = std::max(worst, std::abs(rec.final_state[i] - decay[i] * theta0[i]));
    }
    return {worst <= 1e-12, fmt("max mode error at t=1 over gamma in {0.6,1.0,1.4}: %.2e (tol 1e-12)", worst)};
}

Outcome l2_scaling() {
    const Grid g(1, 1024, two_pi);
    const double gamma = 0.9, beta = 0.5;
    std::vector<double> x, y;
    for (double R : {32.0, 64.0, 128.0, 256.0}) {
        x.push_back(std::log(R));
        y.push_back(std::log(l2_norm(make_truncated_homogeneous_data(1.0, R, Truncation::lowpass, g, gamma, beta))));
    }
    const double target = (4 * gamma - 1 - 2 * beta) / 2;
    const double s = slope(x, y);
    const double rel = std::abs(s / target - 1.0);
    return {rel <= 0.02, fmt("slope %.5f vs %.3f, relative error %.2e (tol 2e-2)", s, target, rel)};
}

Outcome fn_flatness() {
    const Grid g(1, 1024, two_pi);
    const double gamma = 0.9, beta = 0.5, p = 2.0, mu = 0.5;
    const FnNorm norm(DyadicPartition(g), NormParams{p, mu, infinity, critical_s(1, gamma, beta, p, mu)});
    double lo = infinity, hi = 0.0;
    for (double R : {32.0, 64.0, 128.0, 256.0}) {
        const double v = norm(make_truncated_homogeneous_data(1.0, R, Truncation::lowpass, g, gamma, beta));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = hi / lo - 1.0;
    return {spread <= 0.03, fmt("FN norm range [%.6f, %.6f], spread %.2e (tol 3e-2)", lo, hi, spread)};
}

Outcome contraction() {
    const auto& r = small_data_run();
    const auto& d = r.picard.diagnostics;
    double worst = 0.0;
    for (double q : d.ratios)
        worst = std::max(worst, q);
    const bool ok = d.converged && worst < 1.0 && d.sup_norm <= 2.0 * r.epsilon;
    return {ok, fmt("K_est %.4f, eps %.4f, max ratio %.3e", r.K, r.epsilon, worst) +
                    fmt(", sup-node FN %.4f (bound 2 eps = %.4f), %.0f iterations", d.sup_norm, 2.0 * r.epsilon,
                        d.iterations)};
}

Outcome oracle_equivalence() {
    const auto& r = small_data_run();
    const Grid& g = r.theta0.grid();
    const auto P = gsqg(g, 0.5);
    const FnNorm norm(DyadicPartition(g), NormParams{4.0, 1.0, infinity, critical_s(2, 0.8, 0.5, 4.0, 1.0)});
    const auto etd = etd_path(r.theta0, P, 0.8, Scheme::etd_rk2, true, 1e-3, r.nodes);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        worst = std::max(worst, norm(etd.states[i] - r.picard.path.states[i]));
    return {worst <= 1e-4, fmt("sup-node FN difference Picard vs ETD-RK2: %.2e (tol 1e-4)", worst)};
}

Outcome self_similarity() {
    const Grid g(2, 128, two_pi);
    const double gamma = 0.8, beta = 0.5, R1 = 40.0;
    const auto P = gsqg(g, beta);
    const FnNorm norm(DyadicPartition(g), NormParams{4.0, 1.0, infinity, critical_s(2, gamma, beta, 4.0, 1.0)});
    const auto theta0 = make_truncated_homogeneous_data(0.01, R1, Truncation::lowpass, g, gamma, beta);
    SelfSimConfig cfg;
    cfg.pairs = {{0.005, 1}, {0.002, 2}};
    const auto rep = selfsimilarity_experiment(P, theta0, gamma, R1, cfg, norm);
    const double d0 = rep.scalars.at("pair0_deviation"), d1 = rep.scalars.at("pair1_deviation");
    const double base = rep.scalars.at("max_linear_baseline");
    const bool ok = d0 <= 0.05 && d1 <= 0.05 && base <= 1e-3;
    return {ok, fmt("deviation lambda=2: %.2e, lambda=4: %.2e (tol 5e-2); linear baseline %.2e (tol 1e-3)", d0, d1,
                    base)};
}

Outcome stability() {
    const Grid g(2, 128, two_pi);
    const double gamma = 0.8, beta = 0.5;
    const auto P = gsqg(g, beta);
    const FnNorm norm(DyadicPartition(g), NormParams{4.0, 1.0, infinity, critical_s(2, gamma, beta, 4.0, 1.0)});
    const auto theta0 = gaussian_bump(g, 0.5, {1.0, 1.0, 0.0}, 0.5);
    const auto phi0 = theta0 + gaussian_bump(g, 0.05, {3.0, 2.0, 0.0}, 0.3);
    StabilityConfig cfg;
    cfg.fraction = 0.1;
    const auto rep = stability_experiment(theta0, phi0, P, gamma, cfg, norm);
    const double D0 = rep.scalars.at("D0"), DT = rep.scalars.at("DT");
    const double P0 = rep.scalars.at("proxy0"), PT = rep.scalars.at("proxyT");
    const bool ok = DT <= 0.1 * D0 && PT <= 0.1 * P0;
    return {ok, fmt("T=%.4f: D(T)/D(0) = %.4f, proxy(T)/proxy(0) = %.4f (tol 0.1)", rep.scalars.at("T"), DT / D0,
                    PT / P0) +
                    fmt(", max D/proxy ratio %.3f", rep.scalars.at("max_ratio"))};
}

Outcome bernstein() {
    const Grid g(1, 512, two_pi);
    const auto s = bernstein_sweep(g, 2, 6, 50, {2.0, 1.0, 0.5, 0.5}, {1, 0, 0}, 77);
    const bool ok = s.spread() <= 10.0 && s.excess() <= 10.0;
    return {ok, fmt("ratio range [%.4f, %.4f], max/min %.3f, max/(j=2 calibration) %.3f (tol 10)", s.min_ratio,
                    s.max_ratio, s.spread(), s.excess())};
}

Outcome paraproduct() {
    const double e1 = paraproduct_identity_error(Grid(1, 256, two_pi), 50, 91);
    const double e2 = paraproduct_identity_error(Grid(2, 64, two_pi), 50, 92);
    return {std::max(e1, e2) <= 1e-10, fmt("max relative error over 100 pairs: %.2e (tol 1e-10)", std::max(e1, e2))};
}

Outcome holder_young() {
    const auto r1 = holder_young_check(Grid(1, 64, two_pi), 500, 11);
    const auto r2 = holder_young_check(Grid(2, 16, two_pi), 500, 12);
    const int v = r1.holder_violations + r1.young_violations + r2.holder_violations + r2.young_violations;
    return {v == 0 && r1.trials + r2.trials == 1000,
            fmt("%.0f violations in %.0f trials; worst Hoelder ratio %.4f, worst Young ratio %.4f", v,
                r1.trials + r2.trials, std::max(r1.worst_holder_ratio, r2.worst_holder_ratio),
                std::max(r1.worst_young_ratio, r2.worst_young_ratio))};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "partition of unity", 1.0, partition_of_unity},
        {2, "linear exactness", 5.0, linear_exactness},
        {3, "L2 scaling of truncated homogeneous data", 5.0, l2_scaling},
        {4, "FN flatness in R1", 10.0, fn_flatness},
        {5, "contraction and 2 eps bound", 120.0, contraction},
        {6, "Picard vs ETD-RK2 equivalence", 180.0, oracle_equivalence},
        {7, "self-similarity collapse", 180.0, self_similarity},
        {8, "stability trend", 180.0, stability},
        {9, "Bernstein ratio boundedness", 30.0, bernstein},
        {10, "paraproduct identity", 30.0, paraproduct},
        {11, "Hoelder/Young in Morrey norms", 60.0, holder_young},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool ok = out.ok && in_time;
        failures += ok ? 0 : 1;
        std::printf("[%s] C%-2d %s: %s; %.2f s (budget %.0f s)%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    out.detail.c_str(), secs, c.budget_seconds, in_time ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
