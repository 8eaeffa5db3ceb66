#pragma once

#include "fbm/core/field.hpp"
#include "fbm/core/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>
#include <vector>

namespace fbm {

//
// Search space for the Morrey supremum over balls B_R(x0) in frequency space.
//
// Centers: lattice points (in centered integer coordinates) that are
// multiples of `stride` along every axis, extended `margin` lattice steps
// beyond the box. Radii: R = 2^m * dk for m = 0..max_level, open balls
// |xi - x0| < R. max_level < 0 selects the smallest level whose ball covers
// the whole lattice from every center.
//
struct MorreySearch {
    int stride = 4;
    int margin = 0;
    int max_level = -1;
};

namespace detail {

inline long long isqrt(long long x) {
    if (x <= 0)
        return 0;
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(x)));
    while (r * r > x)
        --r;
    while ((r + 1) * (r + 1) <= x)
        ++r;
    return r;
}

// largest h >= 0 with h^2 < rem, or -1 when rem <= 0
inline long long half_width(long long rem) { return rem <= 0 ? -1 : isqrt(rem - 1); }

inline int auto_level(int dim, int points, int margin) {
    const long long span = points - 1 + margin;
    const long long diam2 = static_cast<long long>(dim) * span * span;
    int m = 0;
    while ((1LL << (2 * m)) <= diam2)
        ++m;
    return m;
}

} // namespace detail

inline void validate_search(const MorreySearch& s) {
    if (s.stride < 1 || !std::has_single_bit(static_cast<unsigned>(s.stride)))
        throw config_error("norm.stride must be a power of two >= 1");
    if (s.margin < 0)
        throw config_error("morrey search margin must be >= 0");
}

// Riemann-sum L^p norm of g over the whole lattice (cell volume dk^n).
inline double lattice_lp_norm(const Grid& grid, std::span<const Complex> g, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : g)
            m = std::max(m, std::abs(v));
        return m;
    }
    long double acc = 0.0L;
    for (const auto& v : g)
        acc += std::pow(std::abs(v), p);
    return std::pow(static_cast<double>(acc) * grid.cell_volume(), 1.0 / p);
}

//
// ||g||_{M_{p,mu}} = sup_{x0, R} R^{-mu/p} ||g||_{L^p(B_R(x0))} on the lattice.
//
// For mu = 0 the largest ball dominates and the value is the global discrete
// L^p norm; for p = inf it is max |g|. Both reductions are returned directly.
//
inline double morrey_norm(const Grid& grid, std::span<const Complex> g, double p, double mu,
                          const MorreySearch& search = {}) {
    if (!(p >= 1.0))
        throw domain_error("morrey_norm: p must be >= 1");
    if (!(mu >= 0.0 && mu < grid.dim()))
        throw domain_error("morrey_norm: mu must lie in [0, n)");
    if (g.size() != grid.size())
        throw dimension_error("morrey_norm: array does not match grid");
    validate_search(search);
    if (std::isinf(p) || mu == 0.0)
        return lattice_lp_norm(grid, g, p);

    const int n = grid.dim();
    const int N = grid.points();
    const int half = N / 2;

    // |g|^p in centered layout, prefix-summed along the last axis
    const std::size_t rows = grid.size() / static_cast<std::size_t>(N);
    std::vector<long double> prefix(rows * static_cast<std::size_t>(N + 1), 0.0L);
    bool any = false;
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        const double a = std::abs(g[flat]);
        if (a == 0.0)
            continue;
        any = true;
        const auto k = grid.wavevector(flat);
        std::size_t row = 0;
        for (int d = 0; d < n - 1; ++d)
            row = row * N + static_cast<std::size_t>(k[d] + half);
        prefix[row * (N + 1) + static_cast<std::size_t>(k[n - 1] + half) + 1] = std::pow(a, p);
    }
    if (!any)
        return 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        long double* pr = &prefix[r * (N + 1)];
        for (int x = 0; x < N; ++x)
            pr[x + 1] += pr[x];
    }

    auto row_sum = [&](std::size_t row, long long cx, long long h) -> long double {
        const long long lo = std::max(0LL, cx - h);
        const long long hi = std::min<long long>(N - 1, cx + h);
        if (lo > hi)
            return 0.0L;
        const long double* pr = &prefix[row * (N + 1)];
        const long double s = pr[hi + 1] - pr[lo];
        return s > 0.0L ? s : 0.0L;
    };

    const int levels = search.max_level >= 0 ? search.max_level : detail::auto_level(n, N, search.margin);
    const double cell = grid.cell_volume();
    std::vector<double> radius_factor(levels + 1);
    for (int m = 0; m <= levels; ++m)
        radius_factor[m] = std::pow(std::ldexp(grid.dk(), m), -mu / p);

    // center coordinates along one axis (centered, i.e. index k + N/2)
    std::vector<long long> axis;
    for (long long c = -half - search.margin; c <= half - 1 + search.margin; ++c)
        if (c % search.stride == 0)
            axis.push_back(c + half);

    double best = 0.0;
    auto consider = [&](long double sum, int m) {
        if (sum <= 0.0L)
            return;
        const double v = radius_factor[m] * std::pow(static_cast<double>(sum) * cell, 1.0 / p);
        best = std::max(best, v);
    };

    if (n == 1) {
        for (long long cx : axis)
            for (int m = 0; m <= levels; ++m) {
                const long long R = 1LL << m;
                consider(row_sum(0, cx, R - 1), m);
            }
    } else if (n == 2) {
        for (long long cy : axis)
            for (long long cx : axis)
                for (int m = 0; m <= levels; ++m) {
                    const long long R = 1LL << m;
                    long double sum = 0.0L;
                    const long long ylo = std::max(0LL, cy - R + 1), yhi = std::min<long long>(N - 1, cy + R - 1);
                    for (long long y = ylo; y <= yhi; ++y) {
                        const long long dy = y - cy;
                        sum += row_sum(static_cast<std::size_t>(y), cx, detail::half_width(R * R - dy * dy));
                    }
                    consider(sum, m);
                }
    } else {
        for (long long cz : axis)
            for (long long cy : axis)
                for (long long cx : axis)
                    for (int m = 0; m <= levels; ++m) {
                        const long long R = 1LL << m;
                        long double sum = 0.0L;
                        const long long zlo = std::max(0LL, cz - R + 1), zhi = std::min<long long>(N - 1, cz + R - 1);
                        for (long long z = zlo; z <= zhi; ++z) {
                            const long long dz = z - cz;
                            const long long remz = R * R - dz * dz;
                            const long long ylo = std::max(0LL, cy - R + 1),
                                            yhi = std::min<long long>(N - 1, cy + R - 1);
                            for (long long y = ylo; y <= yhi; ++y) {
                                const long long dy = y - cy;
                                const long long h = detail::half_width(remz - dy * dy);
                                if (h < 0)
                                    continue;
                                sum += row_sum(static_cast<std::size_t>(z * N + y), cx, h);
                            }
                        }
                        consider(sum, m);
                    }
    }
    return best;
}

} // namespace fbm
