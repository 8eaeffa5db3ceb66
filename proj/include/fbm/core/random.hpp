#pragma once

#include "fbm/core/field.hpp"

#include <cstdint>
#include <random>

namespace fbm {

using Rng = std::mt19937_64;

// Independent, reproducible stream for sample `index` of a run seeded with `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x9e3779b9u};
    return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

// Box-Muller; avoids std::normal_distribution so samples are identical across standard libraries.
inline double gaussian(Rng& rng) {
    double u1 = 0.0;
    while (u1 <= 0.0)
        u1 = std::generate_canonical<double, 53>(rng);
    const double u2 = std::generate_canonical<double, 53>(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

//
// Real random field with complex Gaussian coefficients on lo <= |xi| < hi,
// multiplied by |xi|^{-decay}. Hermitian by construction; Nyquist planes are
// left empty.
//
inline SpectralField random_band_field(const Grid& grid, Rng& rng, double lo, double hi, double decay = 0.0) {
    SpectralField f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.wavevector(i);
        const double r = grid.radius(i);
        const double re = gaussian(rng);
        const double im = gaussian(rng);
        if (r == 0.0 || r < lo || r >= hi || grid.touches_nyquist(k))
            continue;
        f[i] = Complex(re, im) * std::pow(r, -decay);
    }
    f.symmetrize();
    return f;
}

} // namespace fbm
