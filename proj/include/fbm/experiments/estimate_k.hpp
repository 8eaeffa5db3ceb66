#pragma once

#include "fbm/core/params.hpp"
#include "fbm/core/random.hpp"
#include "fbm/core/semigroup.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/nonlinearity.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace fbm {

struct KEstimate {
    double value = 0.0;          // max sampled ratio
    int samples = 0;             // pairs that contributed
    int skipped = 0;             // pairs with a zero-norm input
    std::vector<double> ratios;  // per trial, NaN where skipped
    double recommended_epsilon = 0.0; // 0.2 / (4 K), infinite for K = 0
    std::vector<std::string> warnings;
};

inline constexpr double epsilon_margin = 0.2;

namespace detail {

// sup_t ||B(theta, phi)(t)||_FN for time-constant inputs. Each mode of
// B(t)^ = F^ (1 - e^{-t a}) / a grows monotonically in t, and the norm is
// monotone in |coefficients|, so the supremum is the t -> inf limit F^/a.
inline double stationary_bilinear_norm(const SpectralField& theta, const SpectralField& phi, const CouplingSymbol& P,
                                       const Semigroup& G, const FnNorm& norm, bool dealias) {
    SpectralField B = bilinear_term(theta, phi, P, dealias);
    const auto& a = G.symbol();
    for (std::size_t i = 0; i < B.size(); ++i)
        B[i] = a[i] > 0.0 ? B[i] / a[i] : Complex{};
    return norm(B);
}

// random band-limited input: dyadic band inside the resolved, dealiased range
inline SpectralField random_k_input(const Grid& grid, const DyadicPartition& part, Rng& rng) {
    const double top = std::min(part.resolved_upper(), grid.nyquist() * grid.dk() * 2.0 / 3.0);
    const double lo_exp = std::log2(grid.dk());
    const double hi_exp = std::log2(top);
    double a = uniform(rng, lo_exp, hi_exp);
    double b = uniform(rng, lo_exp, hi_exp);
    if (a > b)
        std::swap(a, b);
    b = std::max(b, a + 1.0);
    const double decay = uniform(rng, 0.0, 2.0);
    return random_band_field(grid, rng, std::exp2(a), std::min(std::exp2(b), top), decay);
}

} // namespace detail

//
// Sampled lower bound for the bilinear constant:
//   K_est = max over `trials` random pairs of
//           sup_t ||B(theta, phi)||_FN / (sup_t ||theta||_FN sup_t ||phi||_FN)
// with time-constant band-limited inputs. Trial i draws from substream(seed, i),
// so extending `trials` never lowers the estimate.
//
inline KEstimate estimate_K(const CouplingSymbol& P, double gamma, const FnNorm& norm, int trials, std::uint64_t seed,
                            bool dealias = true) {
    if (trials < 1)
        throw config_error("estimate_k.trials must be >= 1");
    require_same_grid(P.grid(), norm.grid(), "estimate_K");
    if (classify(P.beta(), gamma) != Criticality::subcritical)
        throw config_error("estimate_K requires a sub-critical coupling (beta < 2*gamma)");
    const auto& np = norm.params();
    const auto region = check_well_posedness_region(P.dim(), gamma, P.beta(), np.p, np.mu);
    const Semigroup G(P.grid(), gamma);
    KEstimate est;
    if (!region.ok())
        est.warnings.push_back("parameters outside the well-posedness region: " + region.message());
    for (int t = 0; t < trials; ++t) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(t));
        const auto theta = detail::random_k_input(P.grid(), norm.partition(), rng);
        const auto phi = detail::random_k_input(P.grid(), norm.partition(), rng);
        const double nt = norm(theta), np_ = norm(phi);
        if (!(nt > 0.0) || !(np_ > 0.0)) {
            ++est.skipped;
            est.ratios.push_back(std::nan(""));
            continue;
        }
        const double r = detail::stationary_bilinear_norm(theta, phi, P, G, norm, dealias) / (nt * np_);
        est.ratios.push_back(r);
        est.value = std::max(est.value, r);
        ++est.samples;
    }
    est.recommended_epsilon = est.value > 0.0 ? epsilon_margin / (4.0 * est.value) : infinity;
    return est;
}

} // namespace fbm
