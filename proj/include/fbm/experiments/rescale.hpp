#pragma once

#include "fbm/core/field.hpp"

#include <cmath>
#include <string>

namespace fbm {

// m with lambda = 2^m, or unsupported_error when lambda is not an exact power of two.
inline int dyadic_exponent(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw unsupported_error("rescale: lambda must be a positive power of two");
    int e = 0;
    const double mant = std::frexp(lambda, &e);
    if (mant != 0.5)
        throw unsupported_error("rescale: lambda=" + std::to_string(lambda) + " is not a power of two");
    return e - 1;
}

//
// theta_lambda^(xi) = lambda^{2 gamma - beta - n} theta^(xi / lambda) for lambda = 2^m.
// For m > 0 the image lives on the sublattice lambda Z^n (zero elsewhere);
// for m < 0 modes whose preimage leaves the lattice are dropped. The time tag
// is left unchanged.
//
inline SpectralField rescale_field_dyadic(const SpectralField& f, int m, double gamma, double beta) {
    const auto& grid = f.grid();
    const int n = grid.dim();
    const int half = grid.nyquist();
    const double amp = std::exp2(m * (2.0 * gamma - beta - n));
    SpectralField out(grid, f.time());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.wavevector(i);
        Wavevector src{0, 0, 0};
        bool ok = true;
        for (int d = 0; d < n && ok; ++d) {
            if (m >= 0) {
                const int lam = 1 << m;
                ok = k[d] % lam == 0;
                src[d] = ok ? k[d] / lam : 0;
            } else {
                const long long s = static_cast<long long>(k[d]) << (-m);
                ok = s >= -half && s < half;
                src[d] = ok ? static_cast<int>(s) : 0;
            }
        }
        if (ok)
            out[i] = amp * f.at(src);
    }
    return out;
}

inline SpectralField rescale_field(const SpectralField& f, double lambda, double gamma, double beta) {
    return rescale_field_dyadic(f, dyadic_exponent(lambda), gamma, beta);
}

} // namespace fbm
