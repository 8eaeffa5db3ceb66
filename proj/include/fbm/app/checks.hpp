#pragma once

#include "fbm/core/random.hpp"
#include "fbm/lp/inequalities.hpp"
#include "fbm/lp/paraproduct.hpp"
#include "fbm/lp/partition.hpp"
#include "fbm/solver/etd.hpp"
#include "fbm/symbols/catalog.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fbm {

// max |sum_k phi_k(xi) - 1| over lattice points of the resolved band
inline double partition_unity_defect(const DyadicPartition& part) {
    const auto& grid = part.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.radius(i);
        if (r >= part.resolved_lower() && r <= part.resolved_upper())
            worst = std::max(worst, std::abs(part.total(i) - 1.0));
    }
    return worst;
}

// max_xi |theta(T) - e^{-T |xi|^{2 gamma}} theta0| / max |theta0| for P = 0
inline double linear_exactness_error(const Grid& grid, double gamma, double T, double dt, std::uint64_t seed) {
    Rng rng = substream(seed, 0);
    const auto theta0 = random_band_field(grid, rng, grid.dk(), grid.nyquist() * grid.dk());
    const auto P = make_symbol(SymbolSpec{}, grid);
    const TimeStepConfig ts{T, dt, Scheme::etd_rk2, true, 1, 0};
    const auto rec = etd_integrate(theta0, P, gamma, ts);
    const auto decay = Semigroup(grid, gamma).decay(T);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        err = std::max(err, std::abs(rec.final_state[i] - decay[i] * theta0[i]));
    return err / theta0.max_abs();
}

struct BernsteinSweep {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double calibration = 0.0; // max ratio at the first scale
    double spread() const { return min_ratio > 0.0 ? max_ratio / min_ratio : infinity; }
    double excess() const { return calibration > 0.0 ? max_ratio / calibration : infinity; }
};

// Bernstein ratios of `fields` random annulus fields (3/4 2^j <= |xi| <= 8/3 2^j) per scale j.
inline BernsteinSweep bernstein_sweep(const Grid& grid, int j_lo, int j_hi, int fields, const BernsteinExponents& e,
                                      const Multiindex& alpha, std::uint64_t seed) {
    BernsteinSweep s{infinity, 0.0, 0.0};
    for (int j = j_lo; j <= j_hi; ++j)
        for (int t = 0; t < fields; ++t) {
            Rng rng = substream(seed, static_cast<std::uint64_t>(1000 * j + t));
            const double lo = 0.75 * std::ldexp(1.0, j), hi = 8.0 / 3.0 * std::ldexp(1.0, j);
            const auto f = random_band_field(grid, rng, lo, hi, uniform(rng, -1.0, 1.0));
            const double r = bernstein_check(f, alpha, e, j).ratio;
            s.min_ratio = std::min(s.min_ratio, r);
            s.max_ratio = std::max(s.max_ratio, r);
            if (j == j_lo)
                s.calibration = std::max(s.calibration, r);
        }
    return s;
}

// worst relative error of T_f g + T_g f + R(f, g) against fg over random resolved-band pairs
inline double paraproduct_identity_error(const Grid& grid, int pairs, std::uint64_t seed) {
    const DyadicPartition part(grid);
    double worst = 0.0;
    for (int t = 0; t < pairs; ++t) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(t));
        const auto f = random_band_field(grid, rng, part.resolved_lower(), part.resolved_upper());
        const auto g = random_band_field(grid, rng, part.resolved_lower(), part.resolved_upper());
        const auto pp = paraproduct_decompose(f, g, part);
        const auto fg = product(f, g);
        const auto sum = pp.low_high + pp.high_low + pp.remainder;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            num = std::max(num, std::abs(sum[i] - fg[i]));
            den = std::max(den, std::abs(fg[i]));
        }
        worst = std::max(worst, den > 0.0 ? num / den : num);
    }
    return worst;
}

// max relative error of inverse(forward(x)) over random real samples
inline double roundtrip_error(const Grid& grid, int trials, std::uint64_t seed) {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(t));
        std::vector<double> x(grid.size());
        for (auto& v : x)
            v = gaussian(rng);
        const auto back = inverse_transform(forward_transform(grid, x)).values;
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            num = std::max(num, std::abs(back[i] - x[i]));
            den = std::max(den, std::abs(x[i]));
        }
        worst = std::max(worst, num / den);
    }
    return worst;
}

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    double seconds = 0.0;
};

inline CheckResult timed_check(const std::string& name, double threshold, const std::function<double()>& run) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{name, run(), threshold, false, 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = std::isfinite(r.value) && r.value <= threshold;
    return r;
}

//
// Property suite on one grid: partition of unity, FFT round trip,
// paraproduct identity, Bernstein ratio spread (1D only), Hoelder/Young
// violations and linear exactness of the time stepper.
//
inline std::vector<CheckResult> run_property_suite(const Grid& grid, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const DyadicPartition part(grid);
    out.push_back(timed_check("partition_of_unity", 1e-12, [&] { return partition_unity_defect(part); }));
    out.push_back(timed_check("fft_roundtrip", 1e-12, [&] { return roundtrip_error(grid, 10, seed); }));
    out.push_back(
        timed_check("paraproduct_identity", 1e-10, [&] { return paraproduct_identity_error(grid, 20, seed + 1); }));
    const int j_hi = std::min(6, static_cast<int>(std::floor(std::log2(grid.nyquist() * grid.dk() * 3.0 / 8.0))));
    if (j_hi >= 3) {
        out.push_back(timed_check("bernstein_spread", 10.0, [&] {
            Multiindex alpha{1, 0, 0};
            return bernstein_sweep(grid, 2, j_hi, 10, {2.0, 1.0, 0.5, 0.5 * grid.dim()}, alpha, seed + 2).spread();
        }));
    }
    out.push_back(timed_check("holder_young_violations", 0.0, [&] {
        const auto r = holder_young_check(grid, 100, seed + 3);
        return static_cast<double>(r.holder_violations + r.young_violations);
    }));
    for (double gamma : {0.6, 1.0, 1.4})
        out.push_back(timed_check("linear_exactness_gamma_" + std::to_string(gamma).substr(0, 3), 1e-12,
                                  [&] { return linear_exactness_error(grid, gamma, 1.0, 1e-2, seed + 4); }));
    return out;
}

} // namespace fbm
