#pragma once

#include "fbm/core/field.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace fbm {

// Radial cutoff: 1 on [0, 3/4], 0 on [4/3, inf), quintic smoothstep between.
inline double radial_cutoff(double r) {
    constexpr double lo = 3.0 / 4.0;
    constexpr double hi = 4.0 / 3.0;
    if (r <= lo)
        return 1.0;
    if (r >= hi)
        return 0.0;
    const double t = (r - lo) / (hi - lo);
    return 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

// phi_k(r) = chi(2^{-k} r / 2) - chi(2^{-k} r); supported in [3/4 2^k, 8/3 2^k].
inline double dyadic_weight(int k, double r) {
    const double scaled = std::ldexp(r, -k);
    return radial_cutoff(scaled / 2.0) - radial_cutoff(scaled);
}

//
// Littlewood-Paley blocks phi_k, k_min <= k <= k_max, tabulated on a grid.
//
// Band limits: k_min = ceil(log2(2 pi / L)) - 1, k_max = floor(log2(pi N / L)) - 1.
// Sum over the band equals 1 on 4/3 2^{k_min} <= |xi| <= 3/2 2^{k_max}.
//
class DyadicPartition {
  public:
    explicit DyadicPartition(const Grid& grid) : grid_(grid) {
        k_min_ = static_cast<int>(std::ceil(std::log2(grid.dk()) - 1e-12)) - 1;
        k_max_ = static_cast<int>(std::floor(std::log2(grid.nyquist() * grid.dk()) + 1e-12)) - 1;
        build();
    }

    DyadicPartition(const Grid& grid, int k_min, int k_max) : grid_(grid), k_min_(k_min), k_max_(k_max) {
        if (k_min > k_max)
            throw range_error("dyadic partition: k_min > k_max");
        build();
    }

    const Grid& grid() const noexcept { return grid_; }
    int k_min() const noexcept { return k_min_; }
    int k_max() const noexcept { return k_max_; }
    int blocks() const noexcept { return k_max_ - k_min_ + 1; }

    // |xi| range on which the truncated sum of blocks is exactly 1
    double resolved_lower() const noexcept { return 4.0 / 3.0 * std::ldexp(1.0, k_min_); }
    double resolved_upper() const noexcept { return 3.0 / 2.0 * std::ldexp(1.0, k_max_); }

    void require_block(int k, const char* where) const {
        if (k < k_min_ || k > k_max_)
            throw range_error(std::string(where) + ": block k=" + std::to_string(k) + " outside resolved band [" +
                              std::to_string(k_min_) + ", " + std::to_string(k_max_) + "]");
    }

    const std::vector<double>& weights(int k) const {
        require_block(k, "dyadic partition");
        return (*tables_)[static_cast<std::size_t>(k - k_min_)];
    }

    // sum of phi_k over the band at lattice point i
    double total(std::size_t i) const {
        double s = 0.0;
        for (const auto& t : *tables_)
            s += t[i];
        return s;
    }

  private:
    void build() {
        auto tables = std::make_shared<std::vector<std::vector<double>>>();
        tables->reserve(blocks());
        std::vector<double> radius(grid_.size());
        for (std::size_t i = 0; i < grid_.size(); ++i)
            radius[i] = grid_.radius(i);
        for (int k = k_min_; k <= k_max_; ++k) {
            std::vector<double> w(grid_.size());
            for (std::size_t i = 0; i < grid_.size(); ++i)
                w[i] = radius[i] == 0.0 ? 0.0 : dyadic_weight(k, radius[i]);
            tables->push_back(std::move(w));
        }
        tables_ = std::move(tables);
    }

    Grid grid_;
    int k_min_ = 0;
    int k_max_ = 0;
    std::shared_ptr<const std::vector<std::vector<double>>> tables_;
};

// Delta_k f: coefficients multiplied by phi_k.
inline SpectralField dyadic_block(const SpectralField& f, const DyadicPartition& part, int k) {
    require_same_grid(f.grid(), part.grid(), "dyadic_block");
    const auto& w = part.weights(k);
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= w[i];
    return out;
}

// S_j f = sum_{k_min <= k <= j-1} Delta_k f.
inline SpectralField low_pass(const SpectralField& f, const DyadicPartition& part, int j) {
    require_same_grid(f.grid(), part.grid(), "low_pass");
    if (j < part.k_min() || j > part.k_max() + 1)
        throw range_error("low_pass: j=" + std::to_string(j) + " outside [" + std::to_string(part.k_min()) + ", " +
                          std::to_string(part.k_max() + 1) + "]");
    std::vector<double> w(f.size(), 0.0);
    for (int k = part.k_min(); k < j; ++k) {
        const auto& wk = part.weights(k);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] += wk[i];
    }
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] *= w[i];
    return out;
}

} // namespace fbm
