#pragma once

#include "fbm/core/field.hpp"

#include <cmath>
#include <vector>

namespace fbm {

// |xi|^{2 gamma} at every lattice point (0 at xi = 0).
inline std::vector<double> fractional_symbol(const Grid& grid, double gamma) {
    if (!(gamma > 0.0))
        throw domain_error("fractional_symbol: gamma must be > 0");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.radius(i);
        out[i] = r == 0.0 ? 0.0 : std::pow(r, 2.0 * gamma);
    }
    return out;
}

inline void require_gamma(double gamma, const char* where) {
    if (!(gamma > 0.5))
        throw domain_error(std::string(where) + ": fractional order gamma must be > 1/2");
}

//
// Dissipation semigroup G(t) = exp(-t (-Delta)^gamma), diagonal in Fourier.
// Holds the |xi|^{2 gamma} table for one grid.
//
class Semigroup {
  public:
    Semigroup(const Grid& grid, double gamma) : grid_(grid), gamma_(gamma) {
        require_gamma(gamma, "semigroup");
        symbol_ = fractional_symbol(grid, gamma);
    }

    const Grid& grid() const noexcept { return grid_; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<double>& symbol() const noexcept { return symbol_; }

    std::vector<double> decay(double t) const {
        if (!(t >= 0.0))
            throw domain_error("semigroup: time must be >= 0");
        std::vector<double> out(symbol_.size());
        for (std::size_t i = 0; i < symbol_.size(); ++i)
            out[i] = std::exp(-t * symbol_[i]);
        return out;
    }

    SpectralField apply(const SpectralField& f, double t) const {
        require_same_grid(grid_, f.grid(), "apply_semigroup");
        const auto factor = decay(t);
        SpectralField out = f;
        for (std::size_t i = 0; i < factor.size(); ++i)
            out[i] *= factor[i];
        out.set_time(f.time() + t);
        return out;
    }

  private:
    Grid grid_;
    double gamma_;
    std::vector<double> symbol_;
};

inline SpectralField apply_semigroup(const SpectralField& f, double gamma, double t) {
    return Semigroup(f.grid(), gamma).apply(f, t);
}

// phi_1(z) = (e^z - 1)/z
inline double phi1(double z) {
    if (std::abs(z) < 1e-4)
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return std::expm1(z) / z;
}

// phi_2(z) = (e^z - 1 - z)/z^2; Taylor series near 0 where the quotient cancels
inline double phi2(double z) {
    if (std::abs(z) < 0.1) {
        double term = 0.5, sum = 0.5;
        for (int k = 1; k <= 12; ++k) {
            term *= z / (k + 2);
            sum += term;
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

} // namespace fbm
