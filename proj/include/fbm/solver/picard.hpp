#pragma once

#include "fbm/core/params.hpp"
#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/duhamel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fbm {

struct FixedPointConfig {
    double epsilon = 0.0;   // smallness radius
    double K_bound = 0.0;   // bilinear constant estimate
    int max_iter = 50;
    double tol = 1e-12;     // stop when sup-node FN difference < tol
    int quad_nodes = 32;
    bool theorem_mode = false;
    bool dealias = true;
    Interpolation interpolation = Interpolation::piecewise_linear;
};

// count nodes on [0, T], t_i = T (1 - cos(pi i / (2 (count-1)))): dense near t = 0
inline std::vector<double> clustered_nodes(double T, int count) {
    if (!(T > 0.0) || count < 2)
        throw config_error("picard: need T > 0 and at least 2 nodes");
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i)
        t[i] = T * (1.0 - std::cos(std::numbers::pi * i / (2.0 * (count - 1))));
    t.front() = 0.0;
    t.back() = T;
    return t;
}

struct PicardDiagnostics {
    std::vector<double> differences; // sup-node FN norm of theta^(m) - theta^(m-1)
    std::vector<double> ratios;      // differences[m] / differences[m-1]
    int iterations = 0;
    bool converged = false;
    double initial_norm = 0.0;       // FN norm of theta0
    double sup_norm = 0.0;           // sup over nodes of the FN norm of the solution
    double contraction_estimate = 0.0; // 4 K_bound epsilon
    std::vector<std::string> warnings;

    double max_ratio_after_first() const {
        double m = 0.0;
        for (std::size_t i = 0; i < ratios.size(); ++i)
            m = std::max(m, ratios[i]);
        return m;
    }
};

struct PicardResult {
    FieldPath path;
    PicardDiagnostics diagnostics;
};

//
// Successive approximation for the mild formulation
//   theta(t) = G(t) theta0 + B(theta, theta)(t)
// on a fixed node set, starting from the linear evolution.
//
// In theorem mode the symbol must be sub-critical, the norm parameters must
// lie in the well-posedness region with the scale-invariant s, and
// epsilon < 1/(4 K_bound); data larger than epsilon only produce a warning.
//
inline PicardResult picard_solve(const SpectralField& theta0, const CouplingSymbol& P, double gamma,
                                 const FixedPointConfig& fp, const std::vector<double>& times, const FnNorm& norm) {
    validate_nodes(times, "picard");
    require_same_grid(theta0.grid(), P.grid(), "picard");
    require_gamma(gamma, "picard");
    if (fp.max_iter < 1)
        throw config_error("picard.max_iter must be >= 1");

    PicardDiagnostics diag;
    diag.initial_norm = norm(theta0);
    diag.contraction_estimate = 4.0 * fp.K_bound * fp.epsilon;

    if (fp.theorem_mode) {
        if (classify(P.beta(), gamma) != Criticality::subcritical)
            throw config_error(std::string("picard: theorem mode requires beta < 2*gamma (coupling is ") +
                               to_string(classify(P.beta(), gamma)) + ")");
        const auto& np = norm.params();
        const auto region = check_well_posedness_region(P.dim(), gamma, P.beta(), np.p, np.mu);
        if (!region.ok())
            throw config_error("picard: theorem mode outside well-posedness region: " + region.message());
        const double s = critical_s(P.dim(), gamma, P.beta(), np.p, np.mu);
        if (std::abs(np.s - s) > 1e-12 * std::max(1.0, std::abs(s)))
            throw config_error("picard: theorem mode requires norm.s = n - (n-mu)/p - (2 gamma - beta) = " +
                               std::to_string(s));
        if (!(fp.epsilon > 0.0 && fp.K_bound >= 0.0 && 4.0 * fp.K_bound * fp.epsilon < 1.0))
            throw config_error("picard: epsilon < 1/(4 K_bound) violated (epsilon=" + std::to_string(fp.epsilon) +
                               ", K_bound=" + std::to_string(fp.K_bound) + ")");
        if (diag.initial_norm > fp.epsilon) {
            std::ostringstream os;
            os << "initial FN norm " << diag.initial_norm << " exceeds epsilon " << fp.epsilon;
            diag.warnings.push_back(os.str());
        }
    }

    const Semigroup G(theta0.grid(), gamma);
    std::vector<SpectralField> linear;
    linear.reserve(times.size());
    for (double t : times) {
        auto s = G.apply(theta0, t);
        s.set_time(theta0.time() + t);
        linear.push_back(std::move(s));
    }

    std::vector<SpectralField> current = linear;
    int growth_streak = 0;
    for (int it = 1; it <= fp.max_iter; ++it) {
        std::vector<SpectralField> forcing;
        forcing.reserve(times.size());
        for (const auto& s : current)
            forcing.push_back(nonlinearity(s, P, fp.dealias));
        const auto B = duhamel_path(forcing, times, G, fp.interpolation);

        std::vector<SpectralField> next;
        next.reserve(times.size());
        double diff = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            SpectralField s = linear[i] + B[i];
            s.set_time(linear[i].time());
            check_finite(s, s.time(), "picard");
            diff = std::max(diff, norm(s - current[i]));
            next.push_back(std::move(s));
        }
        current = std::move(next);
        diag.iterations = it;
        if (!diag.differences.empty()) {
            const double prev = diag.differences.back();
            const double ratio = prev > 0.0 ? diff / prev : 0.0;
            diag.ratios.push_back(ratio);
            growth_streak = ratio > 1.0 ? growth_streak + 1 : 0;
        }
        diag.differences.push_back(diff);
        if (diff < fp.tol) {
            diag.converged = true;
            break;
        }
        if (growth_streak >= 3) {
            std::ostringstream os;
            os << "picard: iteration differences grew for 3 consecutive iterations (last ratio "
               << diag.ratios.back() << ")";
            throw non_contraction(os.str(), diag.ratios.back());
        }
    }

    for (const auto& s : current)
        diag.sup_norm = std::max(diag.sup_norm, norm(s));
    if (!diag.converged)
        diag.warnings.push_back("picard: max_iter reached before tolerance");
    return {FieldPath{times, std::move(current)}, std::move(diag)};
}

} // namespace fbm
