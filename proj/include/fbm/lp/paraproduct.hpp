#pragma once

#include "fbm/lp/partition.hpp"

#include <vector>

namespace fbm {

// Bony decomposition fg = T_f g + T_g f + R(f, g) over the resolved band.
struct Paraproduct {
    SpectralField low_high;  // T_f g = sum_k S_{k-1} f * Delta_k g
    SpectralField high_low;  // T_g f = sum_k S_{k-1} g * Delta_k f
    SpectralField remainder; // R(f,g) = sum_k Delta_k f * (Delta_{k-1} + Delta_k + Delta_{k+1}) g
};

// Pointwise product of two fields, evaluated on the grid (no dealiasing).
inline SpectralField product(const SpectralField& f, const SpectralField& g) {
    require_same_grid(f.grid(), g.grid(), "product");
    auto a = inverse_transform_complex(f);
    const auto b = inverse_transform_complex(g);
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] *= b[i];
    return forward_transform_complex(f.grid(), a, f.time());
}

inline Paraproduct paraproduct_decompose(const SpectralField& f, const SpectralField& g, const DyadicPartition& part) {
    require_same_grid(f.grid(), g.grid(), "paraproduct_decompose");
    require_same_grid(f.grid(), part.grid(), "paraproduct_decompose");
    const std::size_t size = f.size();
    const int nb = part.blocks();

    std::vector<std::vector<Complex>> fk, gk;
    fk.reserve(nb);
    gk.reserve(nb);
    for (int k = part.k_min(); k <= part.k_max(); ++k) {
        fk.push_back(inverse_transform_complex(dyadic_block(f, part, k)));
        gk.push_back(inverse_transform_complex(dyadic_block(g, part, k)));
    }

    std::vector<Complex> tfg(size), tgf(size), rem(size);
    std::vector<Complex> sf(size), sg(size); // S_{k-1} = sum of blocks with index <= k-2
    for (int b = 0; b < nb; ++b) {
        if (b >= 2)
            for (std::size_t i = 0; i < size; ++i) {
                sf[i] += fk[b - 2][i];
                sg[i] += gk[b - 2][i];
            }
        for (std::size_t i = 0; i < size; ++i) {
            tfg[i] += sf[i] * gk[b][i];
            tgf[i] += sg[i] * fk[b][i];
            Complex near = gk[b][i];
            if (b > 0)
                near += gk[b - 1][i];
            if (b + 1 < nb)
                near += gk[b + 1][i];
            rem[i] += fk[b][i] * near;
        }
    }
    const Grid& grid = f.grid();
    return {forward_transform_complex(grid, tfg, f.time()), forward_transform_complex(grid, tgf, f.time()),
            forward_transform_complex(grid, rem, f.time())};
}

} // namespace fbm
