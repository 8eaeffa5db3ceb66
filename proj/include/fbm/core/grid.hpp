#pragma once

#include "fbm/core/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>

namespace fbm {

using Wavevector = std::array<int, 3>;
using Frequency = std::array<double, 3>;

//
// Periodic box [0, L)^n sampled with N points per dimension.
//
// Coefficients are stored row-major in FFT order: along each axis the index
// i in [0, N) carries the integer wavenumber i for i < N/2 and i - N
// otherwise, so the lattice is {-N/2, ..., N/2 - 1}^n scaled by 2*pi/L.
// Unused trailing components of Wavevector / Frequency are zero.
//
class Grid {
  public:
    Grid(int dim, int points, double length) : dim_(dim), points_(points), length_(length) {
        if (dim < 1 || dim > 3)
            throw dimension_error("grid: dimension n must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
        if (points < 2 || !std::has_single_bit(static_cast<unsigned>(points)))
            throw dimension_error("grid: N must be a power of two >= 2 (got " + std::to_string(points) + ")");
        if (!(length > 0.0) || !std::isfinite(length))
            throw domain_error("grid: box length L must be positive and finite");
        size_ = 1;
        for (int d = 0; d < dim; ++d)
            size_ *= static_cast<std::size_t>(points);
    }

    int dim() const noexcept { return dim_; }
    int points() const noexcept { return points_; }
    double length() const noexcept { return length_; }
    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return length_ / points_; }

    // lattice step in frequency space, 2*pi/L
    double dk() const noexcept { return 2.0 * std::numbers::pi / length_; }
    double cell_volume() const noexcept { return std::pow(dk(), dim_); }
    int nyquist() const noexcept { return points_ / 2; }

    int wavenumber(int i) const noexcept { return i < points_ / 2 ? i : i - points_; }
    int slot(int k) const noexcept { return ((k % points_) + points_) % points_; }

    Wavevector wavevector(std::size_t flat) const noexcept {
        Wavevector k{0, 0, 0};
        for (int d = dim_ - 1; d >= 0; --d) {
            k[d] = wavenumber(static_cast<int>(flat % points_));
            flat /= points_;
        }
        return k;
    }

    Frequency frequency(std::size_t flat) const noexcept {
        const auto k = wavevector(flat);
        return {k[0] * dk(), k[1] * dk(), k[2] * dk()};
    }

    long long norm2(const Wavevector& k) const noexcept {
        return 1LL * k[0] * k[0] + 1LL * k[1] * k[1] + 1LL * k[2] * k[2];
    }

    // |xi| at a lattice point, in physical frequency units
    double radius(std::size_t flat) const noexcept {
        return dk() * std::sqrt(static_cast<double>(norm2(wavevector(flat))));
    }

    std::size_t flat(const Wavevector& k) const noexcept {
        std::size_t idx = 0;
        for (int d = 0; d < dim_; ++d)
            idx = idx * points_ + static_cast<std::size_t>(slot(k[d]));
        return idx;
    }

    // index of -k (mod N); the Hermitian partner of a lattice point
    std::size_t mirror(std::size_t flat_index) const noexcept {
        auto k = wavevector(flat_index);
        for (int d = 0; d < dim_; ++d)
            k[d] = -k[d];
        return flat(k);
    }

    bool touches_nyquist(const Wavevector& k) const noexcept {
        for (int d = 0; d < dim_; ++d)
            if (k[d] == -points_ / 2)
                return true;
        return false;
    }

    bool operator==(const Grid& o) const noexcept {
        return dim_ == o.dim_ && points_ == o.points_ && length_ == o.length_;
    }

    std::string describe() const {
        return "n=" + std::to_string(dim_) + " N=" + std::to_string(points_) + " L=" + std::to_string(length_);
    }

  private:
    int dim_;
    int points_;
    double length_;
    std::size_t size_ = 1;
};

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b))
        throw dimension_error(std::string(where) + ": grid mismatch (" + a.describe() + " vs " + b.describe() + ")");
}

} // namespace fbm
