#pragma once

#include "fbm/core/field.hpp"
#include "fbm/core/params.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fbm {

using SymbolVector = std::array<Complex, 3>;

inline double vector_norm(const SymbolVector& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

//
// Velocity multiplier u^(xi) = P(xi) theta^(xi), bound to one grid.
//
// evaluate() is the continuous symbol; lattice() is what the solver applies.
// The two agree except on Nyquist planes, where the lattice value averages
// the symbol over the sign flips of the Nyquist components so that real
// scalars keep producing real velocities.
//
class CouplingSymbol {
  public:
    using Evaluator = std::function<SymbolVector(const Frequency&)>;

    struct Traits {
        double beta = 0.0;
        bool homogeneous = false;
        bool divergence_free = false;
    };

    CouplingSymbol(std::string name, const Grid& grid, Traits traits, Evaluator eval)
        : name_(std::move(name)), grid_(grid), traits_(traits), eval_(std::move(eval)) {
        if (!(traits_.beta >= 0.0 && traits_.beta < grid.dim() + 1.0))
            throw config_error("symbol.beta must lie in [0, n+1) (got " + std::to_string(traits_.beta) + ")");
        build_table();
    }

    const std::string& name() const noexcept { return name_; }
    const Grid& grid() const noexcept { return grid_; }
    int dim() const noexcept { return grid_.dim(); }
    double beta() const noexcept { return traits_.beta; }
    bool homogeneous() const noexcept { return traits_.homogeneous; }
    bool divergence_free() const noexcept { return traits_.divergence_free; }

    // C with |P(xi)| <= C |xi|^{beta-1} on every nonzero lattice point
    double growth_constant() const noexcept { return growth_; }

    SymbolVector evaluate(const Frequency& xi) const {
        if (xi[0] == 0.0 && xi[1] == 0.0 && xi[2] == 0.0)
            return {};
        return eval_(xi);
    }

    const std::vector<SymbolVector>& lattice() const noexcept { return *table_; }

  private:
    void build_table() {
        auto table = std::make_shared<std::vector<SymbolVector>>(grid_.size());
        const double dk = grid_.dk();
        const int nyq = grid_.nyquist();
        growth_ = 0.0;
        for (std::size_t i = 0; i < grid_.size(); ++i) {
            const auto k = grid_.wavevector(i);
            if (grid_.norm2(k) == 0)
                continue;
            const Frequency xi{k[0] * dk, k[1] * dk, k[2] * dk};
            const auto value = evaluate(xi);
            const double r = grid_.radius(i);
            growth_ = std::max(growth_, vector_norm(value) / std::pow(r, traits_.beta - 1.0));

            if (!grid_.touches_nyquist(k)) {
                (*table)[i] = value;
                continue;
            }
            // average over +/- flips of the Nyquist components
            int mask = 0;
            for (int d = 0; d < grid_.dim(); ++d)
                if (k[d] == -nyq)
                    mask |= 1 << d;
            SymbolVector acc{};
            int count = 0;
            for (int flips = 0; flips < (1 << grid_.dim()); ++flips) {
                if ((flips & ~mask) != 0)
                    continue;
                Frequency f = xi;
                for (int d = 0; d < grid_.dim(); ++d)
                    if (flips & (1 << d))
                        f[d] = -f[d];
                const auto v = evaluate(f);
                for (int c = 0; c < 3; ++c)
                    acc[c] += v[c];
                ++count;
            }
            for (int c = 0; c < 3; ++c)
                acc[c] /= static_cast<double>(count);
            (*table)[i] = acc;
        }
        growth_ *= 1.0 + 1e-12;
        table_ = std::move(table);
    }

    std::string name_;
    Grid grid_;
    Traits traits_;
    Evaluator eval_;
    double growth_ = 0.0;
    std::shared_ptr<const std::vector<SymbolVector>> table_;
};

// u_k^ = P_k theta^ for k = 1..n; the zero mode of every component is 0.
inline std::vector<SpectralField> velocity_from_scalar(const SpectralField& theta, const CouplingSymbol& P) {
    require_same_grid(theta.grid(), P.grid(), "velocity_from_scalar");
    const auto& table = P.lattice();
    std::vector<SpectralField> u;
    u.reserve(P.dim());
    for (int c = 0; c < P.dim(); ++c) {
        SpectralField comp(theta.grid(), theta.time());
        for (std::size_t i = 0; i < theta.size(); ++i)
            comp[i] = table[i][c] * theta[i];
        u.push_back(std::move(comp));
    }
    return u;
}

struct HomogeneityReport {
    double max_deviation = 0.0; // max relative deviation of |P(2 xi)| from 2^{beta-1}|P(xi)|
    std::size_t pairs = 0;
};

// Compares the symbol on lattice pairs (xi, 2 xi) against exact degree beta-1 scaling.
inline HomogeneityReport check_homogeneity(const CouplingSymbol& P) {
    const auto& grid = P.grid();
    const double dk = grid.dk();
    const double factor = std::pow(2.0, P.beta() - 1.0);
    const int limit = grid.nyquist() / 2; // 2k must stay strictly inside the lattice
    HomogeneityReport report;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.wavevector(i);
        if (grid.norm2(k) == 0)
            continue;
        bool fits = true;
        for (int d = 0; d < grid.dim(); ++d)
            fits = fits && std::abs(k[d]) < limit;
        if (!fits)
            continue;
        const Frequency xi{k[0] * dk, k[1] * dk, k[2] * dk};
        const Frequency xi2{2 * xi[0], 2 * xi[1], 2 * xi[2]};
        const auto a = P.evaluate(xi);
        const auto b = P.evaluate(xi2);
        const double scale = factor * vector_norm(a);
        ++report.pairs;
        if (scale == 0.0 && vector_norm(b) == 0.0)
            continue;
        const double denom = std::max(scale, vector_norm(b));
        for (int c = 0; c < grid.dim(); ++c)
            report.max_deviation =
                std::max(report.max_deviation, std::abs(std::abs(b[c]) - factor * std::abs(a[c])) / denom);
    }
    return report;
}

// max |sum_k xi_k P_k(xi)| / (|xi| |P(xi)|) over the lattice.
inline double divergence_defect(const CouplingSymbol& P) {
    const auto& grid = P.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto xi = grid.frequency(i);
        const auto v = P.evaluate(xi);
        const double scale = grid.radius(i) * vector_norm(v);
        if (scale == 0.0)
            continue;
        Complex acc{};
        for (int c = 0; c < grid.dim(); ++c)
            acc += xi[c] * v[c];
        worst = std::max(worst, std::abs(acc) / scale);
    }
    return worst;
}

} // namespace fbm
