#pragma once

#include "fbm/core/semigroup.hpp"
#include "fbm/solver/nonlinearity.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace fbm {

enum class Interpolation { piecewise_constant, piecewise_linear };

// A time-sampled field trajectory on nodes 0 = t_0 < t_1 < ... .
struct FieldPath {
    std::vector<double> times;
    std::vector<SpectralField> states;

    std::size_t size() const noexcept { return times.size(); }
};

inline void validate_nodes(const std::vector<double>& times, const char* where) {
    if (times.empty() || times.front() != 0.0)
        throw config_error(std::string(where) + ": node set must start at t=0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw config_error(std::string(where) + ": nodes must be strictly increasing");
}

namespace detail {

//
// One interval of the integrating-factor quadrature, applied in place:
//   acc <- e^{-h a} acc + int_0^h e^{-(h - s) a} N(s) ds
// with N piecewise constant (= left) or linear between left and right.
// Weights are exact per mode: h phi1(-ha) for constant; h(phi1 - phi2) on the
// left value and h phi2 on the right value for linear.
//
inline void duhamel_interval(SpectralField& acc, const SpectralField& left, const SpectralField& right, double h,
                             const std::vector<double>& rate, Interpolation interp) {
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double z = -h * rate[i];
        const double e = std::exp(z);
        const double p1 = phi1(z);
        if (interp == Interpolation::piecewise_constant) {
            acc[i] = e * acc[i] + h * p1 * left[i];
        } else {
            const double p2 = phi2(z);
            acc[i] = e * acc[i] + h * ((p1 - p2) * left[i] + p2 * right[i]);
        }
    }
}

} // namespace detail

// B at every node of `times` for the forcing N sampled on the same nodes.
inline std::vector<SpectralField> duhamel_path(const std::vector<SpectralField>& forcing,
                                               const std::vector<double>& times, const Semigroup& G,
                                               Interpolation interp) {
    validate_nodes(times, "duhamel");
    if (forcing.size() != times.size())
        throw config_error("duhamel: forcing and node counts differ");
    std::vector<SpectralField> out;
    out.reserve(times.size());
    SpectralField acc(G.grid(), 0.0);
    out.push_back(acc);
    for (std::size_t m = 0; m + 1 < times.size(); ++m) {
        detail::duhamel_interval(acc, forcing[m], forcing[m + 1], times[m + 1] - times[m], G.symbol(), interp);
        acc.set_time(times[m + 1]);
        out.push_back(acc);
    }
    return out;
}

//
// B(theta, phi)(t) = -int_0^t G(t - tau) div(P[theta] phi)(tau) dtau with both
// paths sampled on the same nodes; t may fall between nodes.
//
inline SpectralField bilinear_duhamel(const FieldPath& theta, const FieldPath& phi, const CouplingSymbol& P,
                                      double gamma, double t,
                                      Interpolation interp = Interpolation::piecewise_linear, bool dealias = true) {
    validate_nodes(theta.times, "bilinear_duhamel");
    if (theta.times != phi.times)
        throw config_error("bilinear_duhamel: theta and phi are sampled on different nodes");
    if (theta.states.size() != theta.times.size() || phi.states.size() != phi.times.size())
        throw config_error("bilinear_duhamel: path has mismatched state and node counts");
    if (!(t >= 0.0) || t > theta.times.back())
        throw config_error("bilinear_duhamel: nodes do not cover [0, t]");
    const Semigroup G(P.grid(), gamma);

    SpectralField acc(P.grid(), t);
    if (t == 0.0)
        return acc;

    auto forcing = [&](std::size_t m) { return bilinear_term(theta.states[m], phi.states[m], P, dealias); };
    SpectralField left = forcing(0);
    for (std::size_t m = 0; m + 1 < theta.times.size(); ++m) {
        const double t0 = theta.times[m], t1 = theta.times[m + 1];
        if (t0 >= t)
            break;
        SpectralField right = forcing(m + 1);
        if (t1 <= t) {
            detail::duhamel_interval(acc, left, right, t1 - t0, G.symbol(), interp);
        } else {
            // partial last interval: interpolate the forcing at t
            const double w = (t - t0) / (t1 - t0);
            SpectralField mid = left;
            if (interp == Interpolation::piecewise_linear)
                for (std::size_t i = 0; i < mid.size(); ++i)
                    mid[i] = (1.0 - w) * left[i] + w * right[i];
            detail::duhamel_interval(acc, left, mid, t - t0, G.symbol(), interp);
            break;
        }
        left = std::move(right);
    }
    acc.set_time(t);
    return acc;
}

} // namespace fbm
