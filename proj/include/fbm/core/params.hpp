#pragma once

#include "fbm/core/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fbm {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

enum class Criticality { subcritical, critical, supercritical };

inline const char* to_string(Criticality c) {
    switch (c) {
    case Criticality::subcritical:
        return "sub-critical";
    case Criticality::critical:
        return "critical";
    case Criticality::supercritical:
        return "super-critical";
    }
    return "?";
}

// Sign of the scaling exponent 2*gamma - beta.
inline Criticality classify(double beta, double gamma) {
    const double gap = 2.0 * gamma - beta;
    if (std::abs(gap) <= 1e-12 * std::max(1.0, 2.0 * gamma))
        return Criticality::critical;
    return gap > 0.0 ? Criticality::subcritical : Criticality::supercritical;
}

// Exponents of FN^s_{p,mu,q}; p and q may be infinite.
struct NormParams {
    double p = 2.0;
    double mu = 0.0;
    double q = infinity;
    double s = 0.0;

    void validate(int dim) const {
        if (!(p >= 1.0))
            throw domain_error("norm.p must be in [1, inf]");
        if (!(q >= 1.0))
            throw domain_error("norm.q must be in [1, inf]");
        if (!(mu >= 0.0 && mu < dim))
            throw domain_error("norm.mu must be in [0, n)");
        if (!std::isfinite(s))
            throw domain_error("norm.s must be finite");
    }
};

// s = n - (n - mu)/p - (2 gamma - beta): the exponent making FN^s scale-invariant.
inline double critical_s(int dim, double gamma, double beta, double p, double mu) {
    const double lp = std::isinf(p) ? 0.0 : (dim - mu) / p;
    return dim - lp - (2.0 * gamma - beta);
}

struct Admissibility {
    std::vector<std::string> failures;
    bool ok() const noexcept { return failures.empty(); }
    std::string message() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < failures.size(); ++i)
            os << (i ? "; " : "") << failures[i];
        return os.str();
    }
};

//
// Parameter region of the global well-posedness theorem:
//   gamma > 1/2,  0 <= beta < 2 gamma < (n + beta + 1)/2,  0 <= mu < n,
//   (n - mu)/(n + beta + 1 - 4 gamma) < p <= inf,  p >= 1.
// Each failed inequality is reported verbatim.
//
inline Admissibility check_well_posedness_region(int dim, double gamma, double beta, double p, double mu) {
    Admissibility a;
    auto fail = [&](const std::string& s) { a.failures.push_back(s); };
    if (!(gamma > 0.5))
        fail("gamma > 1/2 violated (gamma=" + std::to_string(gamma) + ")");
    if (!(beta >= 0.0))
        fail("0 <= beta violated (beta=" + std::to_string(beta) + ")");
    if (!(beta < 2.0 * gamma))
        fail("beta < 2*gamma violated (beta=" + std::to_string(beta) + ", 2*gamma=" + std::to_string(2 * gamma) + ")");
    if (!(2.0 * gamma < (dim + beta + 1.0) / 2.0))
        fail("2*gamma < (n+beta+1)/2 violated (2*gamma=" + std::to_string(2 * gamma) +
             ", (n+beta+1)/2=" + std::to_string((dim + beta + 1.0) / 2.0) + ")");
    if (!(mu >= 0.0 && mu < dim))
        fail("0 <= mu < n violated (mu=" + std::to_string(mu) + ")");
    if (!(p >= 1.0))
        fail("p >= 1 violated (p=" + std::to_string(p) + ")");
    const double denom = dim + beta + 1.0 - 4.0 * gamma;
    if (denom > 0.0) {
        const double pmin = (dim - mu) / denom;
        if (!(p > pmin))
            fail("(n-mu)/(n+beta+1-4*gamma) < p violated (p=" + std::to_string(p) +
                 ", lower bound=" + std::to_string(pmin) + ")");
    } else {
        fail("(n-mu)/(n+beta+1-4*gamma) < p undefined: n+beta+1-4*gamma <= 0");
    }
    return a;
}

} // namespace fbm
