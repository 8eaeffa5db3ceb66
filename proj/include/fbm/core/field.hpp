#pragma once

#include "fbm/core/fft.hpp"
#include "fbm/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace fbm {

using Complex = std::complex<double>;

//
// Fourier-series coefficients of a scalar field on a periodic grid, tagged
// with the simulation time it represents. Coefficients are normalized so the
// zero mode is the spatial mean (forward transform divides by N^n).
//
class SpectralField {
  public:
    explicit SpectralField(Grid grid, double time = 0.0)
        : grid_(grid), coeffs_(grid.size(), Complex{}), time_(time) {}

    SpectralField(Grid grid, std::vector<Complex> coeffs, double time = 0.0)
        : grid_(grid), coeffs_(std::move(coeffs)), time_(time) {
        if (coeffs_.size() != grid_.size())
            throw dimension_error("spectral field: " + std::to_string(coeffs_.size()) +
                                  " coefficients for a grid of " + std::to_string(grid_.size()) + " points");
    }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    double time() const noexcept { return time_; }
    void set_time(double t) noexcept { time_ = t; }

    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    std::span<Complex> coeffs() noexcept { return coeffs_; }
    const std::vector<Complex>& data() const noexcept { return coeffs_; }

    Complex& operator[](std::size_t i) noexcept { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const noexcept { return coeffs_[i]; }

    Complex at(const Wavevector& k) const noexcept { return coeffs_[grid_.flat(k)]; }
    Complex& at(const Wavevector& k) noexcept { return coeffs_[grid_.flat(k)]; }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_grid(grid_, o.grid_, "field +=");
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_grid(grid_, o.grid_, "field -=");
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    SpectralField& operator*=(Complex c) noexcept {
        for (auto& v : coeffs_)
            v *= c;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(Complex c, SpectralField a) { return a *= c; }
    friend SpectralField operator*(SpectralField a, Complex c) { return a *= c; }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& v : coeffs_)
            m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const noexcept {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
    }

    // max |c(-k) - conj(c(k))|; zero for a real field
    double hermitian_defect() const noexcept {
        double m = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            m = std::max(m, std::abs(coeffs_[grid_.mirror(i)] - std::conj(coeffs_[i])));
        return m;
    }

    // Project onto Hermitian-symmetric coefficients (real part of the field).
    void symmetrize() {
        std::vector<Complex> out(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            out[i] = 0.5 * (coeffs_[i] + std::conj(coeffs_[grid_.mirror(i)]));
        coeffs_ = std::move(out);
    }

  private:
    Grid grid_;
    std::vector<Complex> coeffs_;
    double time_;
};

struct RealSamples {
    std::vector<double> values;
    double imaginary_residue = 0.0; // max |Im| before it was discarded
};

inline SpectralField forward_transform(const Grid& grid, std::span<const double> samples, double time = 0.0) {
    if (samples.size() != grid.size())
        throw dimension_error("forward_transform: expected " + std::to_string(grid.size()) + " samples, got " +
                              std::to_string(samples.size()));
    std::vector<Complex> in(samples.begin(), samples.end());
    std::vector<Complex> out(grid.size());
    fft::forward(grid, in, out);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : out)
        v *= scale;
    return SpectralField(grid, std::move(out), time);
}

// Normalized forward transform of complex samples.
inline SpectralField forward_transform_complex(const Grid& grid, std::span<const Complex> samples, double time = 0.0) {
    if (samples.size() != grid.size())
        throw dimension_error("forward_transform: sample count does not match grid");
    std::vector<Complex> out(grid.size());
    fft::forward(grid, samples, out);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : out)
        v *= scale;
    return SpectralField(grid, std::move(out), time);
}

inline std::vector<Complex> inverse_transform_complex(const SpectralField& f) {
    std::vector<Complex> out(f.size());
    fft::backward(f.grid(), f.coeffs(), out);
    return out;
}

inline RealSamples inverse_transform(const SpectralField& f) {
    const auto z = inverse_transform_complex(f);
    RealSamples r;
    r.values.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        r.values[i] = z[i].real();
        r.imaginary_residue = std::max(r.imaginary_residue, std::abs(z[i].imag()));
    }
    return r;
}

// Physical-space samples of a real function on the grid, point j at x = j*h.
template <typename F>
std::vector<double> sample(const Grid& grid, F&& fn) {
    std::vector<double> out(grid.size());
    const double h = grid.spacing();
    for (std::size_t flat = 0; flat < grid.size(); ++flat) {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        std::size_t rest = flat;
        for (int d = grid.dim() - 1; d >= 0; --d) {
            x[d] = static_cast<double>(rest % grid.points()) * h;
            rest /= grid.points();
        }
        out[flat] = fn(x);
    }
    return out;
}

// sqrt(L^n * sum |c_k|^2): physical L2 norm by Parseval.
inline double l2_norm(const SpectralField& f) {
    long double acc = 0.0L;
    for (const auto& v : f.coeffs())
        acc += std::norm(v);
    return std::sqrt(static_cast<double>(acc) * std::pow(f.grid().length(), f.grid().dim()));
}

} // namespace fbm
