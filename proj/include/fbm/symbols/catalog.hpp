#pragma once

#include "fbm/core/snapshot.hpp"
#include "fbm/symbols/coupling.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fbm {

// Config-level description of a coupling (keys symbol.name/alpha/beta/chi).
struct SymbolSpec {
    std::string name = "zero";
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> chi;
    // custom symbols: one FBM1 file per velocity component
    std::vector<std::filesystem::path> paths;
    bool homogeneous = false; // declared homogeneity of a custom table
};

inline const std::vector<std::string>& builtin_symbol_names() {
    static const std::vector<std::string> names{"zero",          "burgers",         "hilbert", "hilbert_alpha",
                                                "vorticity2d",   "gsqg",            "log_coupling",
                                                "loglog_coupling", "mg3d",          "m_coupling", "custom"};
    return names;
}

namespace detail {

inline void require_dim(const std::string& name, const Grid& grid, std::initializer_list<int> allowed) {
    for (int d : allowed)
        if (grid.dim() == d)
            return;
    std::string list;
    for (int d : allowed)
        list += (list.empty() ? "" : "/") + std::to_string(d);
    throw config_error("symbol.name=" + name + " requires n=" + list + " (grid has n=" + std::to_string(grid.dim()) +
                       ")");
}

inline double require_param(const std::optional<double>& v, const char* key, const std::string& name) {
    if (!v)
        throw config_error(std::string(key) + " is required for symbol.name=" + name);
    return *v;
}

inline double radius_of(const Frequency& xi) { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }

// (-i xi_2, i xi_1) g(|xi|): the perpendicular gradient of a radial multiplier
template <typename G>
SymbolVector perp(const Frequency& xi, G&& g) {
    const double w = g(radius_of(xi));
    return {Complex(0.0, -xi[1] * w), Complex(0.0, xi[0] * w), Complex{}};
}

// -i sgn(xi) g(|xi|): 1D Hilbert-type multiplier
template <typename G>
SymbolVector hilbert_like(const Frequency& xi, G&& g) {
    const double sgn = xi[0] > 0 ? 1.0 : (xi[0] < 0 ? -1.0 : 0.0);
    return {Complex(0.0, -sgn * g(std::abs(xi[0]))), Complex{}, Complex{}};
}

inline CouplingSymbol custom_symbol(const SymbolSpec& spec, const Grid& grid) {
    if (spec.paths.size() != static_cast<std::size_t>(grid.dim()))
        throw config_error("symbol.paths must list one snapshot per velocity component (n=" +
                           std::to_string(grid.dim()) + ")");
    std::vector<SpectralField> comps;
    double beta = 0.0;
    for (const auto& p : spec.paths) {
        auto snap = read_snapshot(p);
        require_same_grid(snap.field.grid(), grid, "custom symbol");
        beta = snap.header.beta;
        comps.push_back(std::move(snap.field));
    }
    if (spec.beta)
        beta = *spec.beta;
    auto table = std::make_shared<std::vector<SpectralField>>(std::move(comps));
    auto eval = [table, grid](const Frequency& xi) {
        SymbolVector v{};
        Wavevector k{0, 0, 0};
        for (int d = 0; d < grid.dim(); ++d) {
            // periodic lookup: +N/2 and -N/2 share the Nyquist slot
            const double idx = std::round(xi[d] / grid.dk());
            if (std::abs(idx) > grid.nyquist())
                return v;
            k[d] = grid.wavenumber(grid.slot(static_cast<int>(idx)));
        }
        for (int c = 0; c < grid.dim(); ++c)
            v[c] = (*table)[c].at(k);
        return v;
    };
    return CouplingSymbol("custom", grid, {beta, spec.homogeneous, false}, eval);
}

} // namespace detail

//
// Builtin couplings. Growth orders: burgers/hilbert 1, hilbert_alpha alpha+1,
// vorticity2d 0, gsqg beta, log couplings alpha (non-homogeneous), mg3d 2,
// m_coupling 1 (non-homogeneous).
//
// mg3d is a stand-in for the magneto-geostrophic coupling: it keeps the
// anisotropic denominator |xi|^2 xi_3^2 + xi_2^4 of that symbol inside a
// bounded degree-zero factor
//     rho(xi) = |xi|^2 xi_3^2 / (|xi|^2 xi_3^2 + xi_2^4),
// and sets P(xi) = i rho(xi) (xi_2, -xi_1, 0), which is divergence-free,
// homogeneous of degree 1 and non-radial. rho is taken as 0 on the xi_1 axis,
// where it is 0/0. The published symbol can be supplied through `custom`.
//
inline CouplingSymbol make_symbol(const SymbolSpec& spec, const Grid& grid) {
    const std::string& name = spec.name;
    using detail::perp;
    using detail::hilbert_like;

    if (name == "zero") {
        return CouplingSymbol(name, grid, {spec.beta.value_or(0.0), true, true},
                              [](const Frequency&) { return SymbolVector{}; });
    }
    if (name == "burgers") {
        detail::require_dim(name, grid, {1});
        return CouplingSymbol(name, grid, {1.0, true, false},
                              [](const Frequency&) { return SymbolVector{Complex(1.0, 0.0), {}, {}}; });
    }
    if (name == "hilbert") {
        detail::require_dim(name, grid, {1});
        return CouplingSymbol(name, grid, {1.0, true, false},
                              [](const Frequency& xi) { return hilbert_like(xi, [](double) { return 1.0; }); });
    }
    if (name == "hilbert_alpha") {
        detail::require_dim(name, grid, {1});
        const double alpha = detail::require_param(spec.alpha, "symbol.alpha", name);
        return CouplingSymbol(name, grid, {alpha + 1.0, true, false}, [alpha](const Frequency& xi) {
            return hilbert_like(xi, [alpha](double r) { return std::pow(r, alpha); });
        });
    }
    if (name == "vorticity2d") {
        detail::require_dim(name, grid, {2});
        return CouplingSymbol(name, grid, {0.0, true, true},
                              [](const Frequency& xi) { return perp(xi, [](double r) { return 1.0 / (r * r); }); });
    }
    if (name == "gsqg") {
        detail::require_dim(name, grid, {2});
        const double beta = detail::require_param(spec.beta, "symbol.beta", name);
        return CouplingSymbol(name, grid, {beta, true, true}, [beta](const Frequency& xi) {
            return perp(xi, [beta](double r) { return std::pow(r, beta - 2.0); });
        });
    }
    if (name == "log_coupling" || name == "loglog_coupling") {
        detail::require_dim(name, grid, {1, 2});
        const double alpha = detail::require_param(spec.alpha, "symbol.alpha", name);
        const double chi = detail::require_param(spec.chi, "symbol.chi", name);
        if (!(chi > 0.0))
            throw config_error("symbol.chi must be > 0 for " + name);
        const bool loglog = name == "loglog_coupling";
        auto radial = [alpha, chi, loglog](double r) {
            const double l = std::log1p(r * r);
            return std::pow(r, alpha) * std::pow(loglog ? std::log1p(l) : l, chi);
        };
        if (grid.dim() == 2)
            return CouplingSymbol(name, grid, {alpha, false, true}, [radial](const Frequency& xi) {
                return perp(xi, [&](double r) { return radial(r) / (r * r); });
            });
        return CouplingSymbol(name, grid, {alpha, false, false}, [radial](const Frequency& xi) {
            return hilbert_like(xi, [&](double r) { return radial(r) / r; });
        });
    }
    if (name == "mg3d") {
        detail::require_dim(name, grid, {3});
        return CouplingSymbol(name, grid, {2.0, true, true}, [](const Frequency& xi) {
            const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            const double num = r2 * xi[2] * xi[2];
            const double den = num + xi[1] * xi[1] * xi[1] * xi[1];
            const double rho = den == 0.0 ? 0.0 : num / den;
            return SymbolVector{Complex(0.0, rho * xi[1]), Complex(0.0, -rho * xi[0]), Complex{}};
        });
    }
    if (name == "m_coupling") {
        detail::require_dim(name, grid, {2});
        const double chi = spec.chi.value_or(0.5);
        if (!(chi > 0.0 && chi < 1.0))
            throw config_error("symbol.chi must lie in (0, 1) for m_coupling so that m grows slower than log log");
        return CouplingSymbol(name, grid, {1.0, false, true}, [chi](const Frequency& xi) {
            return perp(xi, [chi](double r) { return (1.0 + std::pow(std::log1p(std::log1p(r)), chi)) / r; });
        });
    }
    if (name == "custom")
        return detail::custom_symbol(spec, grid);

    throw catalog_error("symbol.name: unknown coupling '" + name + "'");
}

} // namespace fbm
