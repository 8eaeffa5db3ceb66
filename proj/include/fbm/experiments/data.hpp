#pragma once

#include "fbm/core/field.hpp"

#include <cmath>
#include <string>

namespace fbm {

enum class Truncation { lowpass, highpass };

inline Truncation parse_truncation(const std::string& s) {
    if (s == "lowpass")
        return Truncation::lowpass;
    if (s == "highpass")
        return Truncation::highpass;
    throw config_error("ic.mode: expected lowpass or highpass (got '" + s + "')");
}

//
// Truncated homogeneous data: delta |xi|^{-(n - (2 gamma - beta))} restricted
// to |xi| < R (lowpass) or |xi| > R (highpass); 0 at xi = 0. Real and radial,
// hence Hermitian. R must lie in (dk, nyquist * dk].
//
inline SpectralField make_truncated_homogeneous_data(double delta, double R, Truncation mode, const Grid& grid,
                                                     double gamma, double beta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw config_error("ic.delta must be > 0");
    const double top = grid.nyquist() * grid.dk();
    if (!(R > grid.dk() && R <= top))
        throw config_error("ic.R1 must lie in (" + std::to_string(grid.dk()) + ", " + std::to_string(top) +
                           "] for this grid (got " + std::to_string(R) + ")");
    const double exponent = -(grid.dim() - (2.0 * gamma - beta));
    SpectralField f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.radius(i);
        if (r == 0.0)
            continue;
        const bool keep = mode == Truncation::lowpass ? r < R : r > R;
        if (keep)
            f[i] = delta * std::pow(r, exponent);
    }
    return f;
}

// Periodic Gaussian bump amplitude * exp(-|x - center|^2 / (2 width^2)), mean removed.
inline SpectralField gaussian_bump(const Grid& grid, double amplitude, const std::array<double, 3>& center,
                                   double width) {
    if (!(width > 0.0))
        throw config_error("ic.width must be > 0");
    const double L = grid.length();
    auto fn = [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int d = 0; d < grid.dim(); ++d) {
            double dx = std::remainder(x[d] - center[d], L);
            r2 += dx * dx;
        }
        return amplitude * std::exp(-r2 / (2.0 * width * width));
    };
    auto f = forward_transform(grid, sample(grid, fn));
    f[0] = Complex{};
    return f;
}

// amplitude * cos(k . x): coefficients amplitude/2 at +k and -k.
inline SpectralField single_mode_field(const Grid& grid, const Wavevector& k, double amplitude) {
    if (grid.touches_nyquist(k))
        throw config_error("ic.k must not lie on the Nyquist plane");
    for (int d = 0; d < grid.dim(); ++d)
        if (std::abs(k[d]) >= grid.nyquist())
            throw config_error("ic.k outside the lattice");
    SpectralField f(grid);
    const Wavevector mk{-k[0], -k[1], -k[2]};
    f.at(k) += 0.5 * amplitude;
    f.at(mk) += 0.5 * amplitude;
    return f;
}

} // namespace fbm
