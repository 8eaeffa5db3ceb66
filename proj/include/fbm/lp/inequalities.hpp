#pragma once

#include "fbm/core/random.hpp"
#include "fbm/lp/morrey.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace fbm {

using Multiindex = std::array<int, 3>;

struct BernsteinExponents {
    double p = 2.0;  // input space M_{p, mu1}
    double q = 2.0;  // output space M_{q, mu2}
    double mu1 = 0.0;
    double mu2 = 0.0;
};

struct BernsteinReport {
    double lhs = 0.0;   // ||(i xi)^alpha f^||_{M_{q,mu2}}
    double input = 0.0; // ||f^||_{M_{p,mu1}}
    double scale = 0.0; // 2^{j|alpha| + j((n-mu2)/q - (n-mu1)/p)}
    double ratio = 0.0;
};

inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

//
// Ratio of the two sides of the Bernstein-type estimate
//   ||(i xi)^alpha f^||_{M_{q,mu2}} <= C 2^{j|alpha| + j((n-mu2)/q - (n-mu1)/p)} ||f^||_{M_{p,mu1}}
// for f^ supported in |xi| <= A 2^j. Requires 1 <= q <= p <= inf and
// (n-mu2)/p <= (n-mu1)/q.
//
inline BernsteinReport bernstein_check(const SpectralField& f, const Multiindex& alpha, const BernsteinExponents& e,
                                       int j, double support_factor = 8.0 / 3.0, const MorreySearch& search = {}) {
    const auto& grid = f.grid();
    const int n = grid.dim();
    if (!(e.q >= 1.0 && e.q <= e.p))
        throw config_error("bernstein: requires 1 <= q <= p");
    if (!(e.mu1 >= 0.0 && e.mu1 < n && e.mu2 >= 0.0 && e.mu2 < n))
        throw config_error("bernstein: requires 0 <= mu1, mu2 < n");
    if (!((n - e.mu2) * inv(e.p) <= (n - e.mu1) * inv(e.q) + 1e-15))
        throw config_error("bernstein: requires (n-mu2)/p <= (n-mu1)/q");

    const double bound = support_factor * std::ldexp(1.0, j) * (1.0 + 1e-12);
    int order = 0;
    for (int d = 0; d < 3; ++d) {
        if (alpha[d] < 0 || (d >= n && alpha[d] != 0))
            throw config_error("bernstein: multiindex must be non-negative and match the dimension");
        order += alpha[d];
    }

    std::vector<Complex> weighted(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == Complex{})
            continue;
        if (grid.radius(i) > bound)
            throw precondition_error("bernstein: f^ not supported in |xi| <= A 2^j (j=" + std::to_string(j) + ")");
        const auto xi = grid.frequency(i);
        Complex m{1.0, 0.0};
        for (int d = 0; d < n; ++d)
            for (int r = 0; r < alpha[d]; ++r)
                m *= Complex(0.0, xi[d]);
        weighted[i] = m * f[i];
    }

    BernsteinReport rep;
    rep.lhs = morrey_norm(grid, weighted, e.q, e.mu2, search);
    rep.input = morrey_norm(grid, f.coeffs(), e.p, e.mu1, search);
    rep.scale = std::pow(2.0, j * order + j * ((n - e.mu2) * inv(e.q) - (n - e.mu1) * inv(e.p)));
    rep.ratio = rep.input > 0.0 ? rep.lhs / (rep.scale * rep.input) : 0.0;
    return rep;
}

// Hoelder tuple: 1/p3 = 1/p1 + 1/p2 and mu3/p3 = mu1/p1 + mu2/p2.
struct HolderExponents {
    double p1, mu1, p2, mu2, p3, mu3;

    void validate(int dim) const {
        for (double p : {p1, p2, p3})
            if (!(p >= 1.0))
                throw config_error("holder: exponents must be >= 1");
        for (double mu : {mu1, mu2, mu3})
            if (!(mu >= 0.0 && mu < dim))
                throw config_error("holder: mu must lie in [0, n)");
        if (std::abs(inv(p3) - inv(p1) - inv(p2)) > 1e-12)
            throw config_error("holder: 1/p3 != 1/p1 + 1/p2");
        if (std::abs(mu3 * inv(p3) - mu1 * inv(p1) - mu2 * inv(p2)) > 1e-12)
            throw config_error("holder: mu3/p3 != mu1/p1 + mu2/p2");
    }
};

// ||f g||_{M_{p3,mu3}} / (||f||_{M_{p1,mu1}} ||g||_{M_{p2,mu2}}), arrays on the frequency lattice.
inline double holder_ratio(const Grid& grid, std::span<const Complex> f, std::span<const Complex> g,
                           const HolderExponents& e, const MorreySearch& search = {}) {
    e.validate(grid.dim());
    std::vector<Complex> fg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        fg[i] = f[i] * g[i];
    const double den = morrey_norm(grid, f, e.p1, e.mu1, search) * morrey_norm(grid, g, e.p2, e.mu2, search);
    return den > 0.0 ? morrey_norm(grid, fg, e.p3, e.mu3, search) / den : 0.0;
}

// Discrete linear convolution on the frequency lattice, truncated to the box:
// (phi * g)(xi) = sum_eta phi(eta) g(xi - eta) dk^n.
inline std::vector<Complex> lattice_convolution(const Grid& grid, std::span<const Complex> phi,
                                                std::span<const Complex> g) {
    const int n = grid.dim();
    const int half = grid.nyquist();
    std::vector<Complex> out(grid.size());
    const double cell = grid.cell_volume();
    for (std::size_t a = 0; a < grid.size(); ++a) {
        if (phi[a] == Complex{})
            continue;
        const auto eta = grid.wavevector(a);
        for (std::size_t b = 0; b < grid.size(); ++b) {
            if (g[b] == Complex{})
                continue;
            auto xi = grid.wavevector(b);
            bool inside = true;
            for (int d = 0; d < n; ++d) {
                xi[d] += eta[d];
                inside = inside && xi[d] >= -half && xi[d] < half;
            }
            if (inside)
                out[grid.flat(xi)] += phi[a] * g[b] * cell;
        }
    }
    return out;
}

// ||phi * g||_{M_{p,mu}} / (||phi||_1 ||g||_{M_{p,mu}}). The norm of g is taken
// over the translation closure of the center set, which requires stride 1.
inline double young_ratio(const Grid& grid, std::span<const Complex> phi, std::span<const Complex> g, double p,
                          double mu) {
    int reach = 0;
    double l1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (phi[i] == Complex{})
            continue;
        const auto k = grid.wavevector(i);
        for (int d = 0; d < grid.dim(); ++d)
            reach = std::max(reach, std::abs(k[d]));
        l1 += std::abs(phi[i]);
    }
    l1 *= grid.cell_volume();
    const auto conv = lattice_convolution(grid, phi, g);
    const MorreySearch inner{1, 0, -1};
    const MorreySearch outer{1, reach, detail::auto_level(grid.dim(), grid.points(), 0)};
    const double den = l1 * morrey_norm(grid, g, p, mu, outer);
    return den > 0.0 ? morrey_norm(grid, conv, p, mu, inner) / den : 0.0;
}

struct HolderYoungReport {
    int trials = 0;
    int holder_violations = 0;
    int young_violations = 0;
    double worst_holder_ratio = 0.0;
    double worst_young_ratio = 0.0;
};

namespace detail {

// random lattice array: Gaussian values on a random sub-box, optionally sparse
inline std::vector<Complex> random_lattice_array(const Grid& grid, Rng& rng, int half_width) {
    std::vector<Complex> a(grid.size());
    const double density = uniform(rng, 0.2, 1.0);
    const double scale = std::exp(uniform(rng, -3.0, 3.0));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.wavevector(i);
        bool inside = true;
        for (int d = 0; d < grid.dim(); ++d)
            inside = inside && std::abs(k[d]) <= half_width;
        const double re = gaussian(rng), im = gaussian(rng), u = uniform(rng, 0.0, 1.0);
        if (inside && u < density)
            a[i] = scale * Complex(re, im);
    }
    return a;
}

inline HolderExponents random_holder_tuple(Rng& rng, int dim) {
    auto draw_p = [&] { return uniform(rng, 0.0, 1.0) < 0.1 ? infinity : uniform(rng, 2.0, 8.0); };
    HolderExponents e{};
    e.p1 = draw_p();
    e.p2 = draw_p();
    e.mu1 = std::isinf(e.p1) ? 0.0 : uniform(rng, 0.0, dim * 0.999);
    e.mu2 = std::isinf(e.p2) ? 0.0 : uniform(rng, 0.0, dim * 0.999);
    const double r3 = inv(e.p1) + inv(e.p2);
    e.p3 = r3 == 0.0 ? infinity : 1.0 / r3;
    e.mu3 = r3 == 0.0 ? 0.0 : e.p3 * (e.mu1 * inv(e.p1) + e.mu2 * inv(e.p2));
    return e;
}

} // namespace detail

//
// Randomized sweep of the Morrey Hoelder and Young inequalities on the
// discrete norms: `trials` draws of exponents and inputs, each tested with
// relative slack `tolerance`.
//
inline HolderYoungReport holder_young_check(const Grid& grid, int trials, std::uint64_t seed,
                                            double tolerance = 1e-12) {
    HolderYoungReport rep;
    const int half = grid.nyquist();
    for (int t = 0; t < trials; ++t) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(t));
        const auto e = detail::random_holder_tuple(rng, grid.dim());
        const int w = static_cast<int>(uniform(rng, 1.0, half - 1.0));
        const auto f = detail::random_lattice_array(grid, rng, w);
        const auto g = detail::random_lattice_array(grid, rng, w);
        const double hr = holder_ratio(grid, f, g, e, {1, 0, -1});
        rep.worst_holder_ratio = std::max(rep.worst_holder_ratio, hr);
        if (hr > 1.0 + tolerance)
            ++rep.holder_violations;

        const auto phi = detail::random_lattice_array(grid, rng, 2);
        const double p = uniform(rng, 0.0, 1.0) < 0.1 ? infinity : uniform(rng, 1.0, 6.0);
        const double mu = std::isinf(p) ? 0.0 : uniform(rng, 0.0, grid.dim() * 0.999);
        const double yr = young_ratio(grid, phi, g, p, mu);
        rep.worst_young_ratio = std::max(rep.worst_young_ratio, yr);
        if (yr > 1.0 + tolerance)
            ++rep.young_violations;
        ++rep.trials;
    }
    return rep;
}

} // namespace fbm
