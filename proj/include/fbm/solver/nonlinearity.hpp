#pragma once

#include "fbm/symbols/coupling.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace fbm {

inline constexpr double blowup_threshold = 1e12;

// Throws numerical_blowup if any coefficient is NaN/Inf or exceeds the threshold.
inline void check_finite(const SpectralField& f, double time, const char* where) {
    for (const auto& c : f.coeffs()) {
        const double a = std::abs(c);
        if (!std::isfinite(a) || a > blowup_threshold) {
            std::ostringstream os;
            os << where << ": numerical blowup at t=" << time << " (|coefficient|=" << a << ")";
            throw numerical_blowup(os.str(), time);
        }
    }
}

// 2/3 rule: a mode survives iff every |k_i| <= (2/3) * N/2.
inline bool dealias_keeps(const Grid& grid, const Wavevector& k) {
    for (int d = 0; d < grid.dim(); ++d)
        if (3 * std::abs(k[d]) > grid.points())
            return false;
    return true;
}

inline void apply_dealias(SpectralField& f) {
    const auto& grid = f.grid();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!dealias_keeps(grid, grid.wavevector(i)))
            f[i] = Complex{};
}

//
// -div(P[theta] phi), computed pseudo-spectrally: velocity and transported
// field are taken to physical space, multiplied pointwise, and the flux is
// differentiated in Fourier space. The derivative symbol i xi_d is 0 on the
// Nyquist plane of axis d; the zero mode of the result is exactly 0.
//
inline SpectralField bilinear_term(const SpectralField& theta, const SpectralField& phi, const CouplingSymbol& P,
                                   bool dealias) {
    require_same_grid(theta.grid(), phi.grid(), "bilinear_term");
    require_same_grid(theta.grid(), P.grid(), "bilinear_term");
    const auto& grid = theta.grid();
    SpectralField out(grid, theta.time());
    std::vector<Wavevector> lattice(grid.size());
    std::vector<char> keep(grid.size(), 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        lattice[i] = grid.wavevector(i);
        keep[i] = !dealias || dealias_keeps(grid, lattice[i]);
    }
    SpectralField a = theta, b = phi;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!keep[i]) {
            a[i] = Complex{};
            b[i] = Complex{};
        }
    const auto velocity = velocity_from_scalar(a, P);
    bool moving = false;
    for (const auto& u : velocity)
        moving = moving || u.max_abs() > 0.0;
    if (!moving)
        return out;
    const auto transported = inverse_transform_complex(b);
    std::vector<Complex> flux(grid.size());
    for (int c = 0; c < grid.dim(); ++c) {
        const auto uc = inverse_transform_complex(velocity[c]);
        for (std::size_t i = 0; i < flux.size(); ++i)
            flux[i] = uc[i] * transported[i];
        const auto fhat = forward_transform_complex(grid, flux);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const int k = lattice[i][c];
            if (keep[i] && k != -grid.nyquist())
                out[i] -= Complex(0.0, k * grid.dk()) * fhat[i];
        }
    }
    out[0] = Complex{};
    check_finite(out, theta.time(), "nonlinearity");
    return out;
}

// -div(u theta) with u = P[theta].
inline SpectralField nonlinearity(const SpectralField& theta, const CouplingSymbol& P, bool dealias = true) {
    return bilinear_term(theta, theta, P, dealias);
}

} // namespace fbm
