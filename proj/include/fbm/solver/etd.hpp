#pragma once

#include "fbm/lp/fn_norm.hpp"
#include "fbm/solver/duhamel.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace fbm {

enum class Scheme { etd_euler, etd_rk2 };

inline const char* to_string(Scheme s) { return s == Scheme::etd_euler ? "etd_euler" : "etd_rk2"; }

inline Scheme parse_scheme(const std::string& name) {
    if (name == "etd_euler")
        return Scheme::etd_euler;
    if (name == "etd_rk2")
        return Scheme::etd_rk2;
    throw config_error("time.scheme: unknown scheme '" + name + "' (expected etd_euler or etd_rk2)");
}

struct TimeStepConfig {
    double T = 1.0;
    double dt = 1e-3;
    Scheme scheme = Scheme::etd_rk2;
    bool dealias = true;
    int record_every = 1;   // steps between norm samples
    int snapshot_every = 0; // steps between stored snapshots, 0 = none

    void validate() const {
        if (!(dt > 0.0) || !std::isfinite(dt))
            throw config_error("time.dt must be > 0");
        if (!(T >= dt) || !std::isfinite(T))
            throw config_error("time.T must be >= time.dt");
        if (record_every < 1)
            throw config_error("time.record_every must be >= 1");
        if (snapshot_every < 0)
            throw config_error("output.snapshot_every must be >= 0");
    }

    int steps() const { return static_cast<int>(std::ceil(T / dt - 1e-9)); }
};

//
// One exponential time-differencing step of size h for
//   u_t = -|xi|^{2 gamma} u + N(u).
// etd_euler: u <- e^{z} u + h phi1(z) N(u)
// etd_rk2:   a = e^{z} u + h phi1(z) N(u);  u <- a + h phi2(z) (N(a) - N(u))
// with z = -h |xi|^{2 gamma}. Per-mode coefficients are cached for the last h.
//
class EtdStepper {
  public:
    EtdStepper(const CouplingSymbol& P, double gamma, Scheme scheme, bool dealias)
        : P_(P), G_(P.grid(), gamma), scheme_(scheme), dealias_(dealias) {}

    SpectralField step(const SpectralField& u, double h) const {
        prepare(h);
        const SpectralField Nu = nonlinearity(u, P_, dealias_);
        SpectralField a(u.grid(), u.time() + h);
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = e_[i] * u[i] + w1_[i] * Nu[i];
        if (scheme_ == Scheme::etd_rk2) {
            const SpectralField Na = nonlinearity(a, P_, dealias_);
            for (std::size_t i = 0; i < a.size(); ++i)
                a[i] += w2_[i] * (Na[i] - Nu[i]);
        }
        check_finite(a, a.time(), to_string(scheme_));
        return a;
    }

    // Advance by `span` in ceil(span / dt_max) equal substeps.
    SpectralField advance(const SpectralField& u, double span, double dt_max) const {
        if (span <= 0.0)
            return u;
        const int m = std::max(1, static_cast<int>(std::ceil(span / dt_max - 1e-9)));
        const double h = span / m;
        SpectralField v = u;
        const double t0 = u.time();
        for (int s = 0; s < m; ++s) {
            v = step(v, h);
            v.set_time(t0 + (s + 1) * h);
        }
        v.set_time(t0 + span);
        return v;
    }

    const Semigroup& semigroup() const noexcept { return G_; }
    Scheme scheme() const noexcept { return scheme_; }

  private:
    void prepare(double h) const {
        if (h == cached_h_)
            return;
        const auto& rate = G_.symbol();
        e_.resize(rate.size());
        w1_.resize(rate.size());
        w2_.resize(rate.size());
        for (std::size_t i = 0; i < rate.size(); ++i) {
            const double z = -h * rate[i];
            e_[i] = std::exp(z);
            w1_[i] = h * phi1(z);
            w2_[i] = h * phi2(z);
        }
        cached_h_ = h;
    }

    const CouplingSymbol& P_;
    Semigroup G_;
    Scheme scheme_;
    bool dealias_;
    mutable double cached_h_ = -1.0;
    mutable std::vector<double> e_, w1_, w2_;
};

struct NormSample {
    double t = 0.0;
    double fn_norm = 0.0;  // NaN when no FN norm was configured
    double l2_norm = 0.0;
    double max_coeff = 0.0;
};

struct BlowupInfo {
    double time = 0.0;
    std::string message;
};

struct RunRecord {
    Scheme scheme = Scheme::etd_rk2;
    double dt = 0.0;
    int steps = 0;
    std::vector<NormSample> series;
    std::vector<SpectralField> snapshots;
    SpectralField final_state; // last finite state
    std::optional<BlowupInfo> blowup;
};

inline NormSample sample_norms(const SpectralField& f, const FnNorm* norm) {
    return {f.time(), norm ? (*norm)(f) : std::nan(""), l2_norm(f), f.max_abs()};
}

//
// Integrates to ts.T. A numerical blowup stops the run and is recorded in
// `blowup`; final_state then holds the last finite state.
//
inline RunRecord etd_run(const SpectralField& theta0, const CouplingSymbol& P, double gamma, const TimeStepConfig& ts,
                         const FnNorm* norm = nullptr) {
    ts.validate();
    require_same_grid(theta0.grid(), P.grid(), "etd");
    const EtdStepper stepper(P, gamma, ts.scheme, ts.dealias);
    const int n = ts.steps();
    const double h = ts.T / n;

    RunRecord rec{ts.scheme, h, 0, {}, {}, theta0, std::nullopt};
    const double t0 = theta0.time();
    rec.series.push_back(sample_norms(theta0, norm));
    if (ts.snapshot_every > 0)
        rec.snapshots.push_back(theta0);
    for (int s = 1; s <= n; ++s) {
        try {
            rec.final_state = stepper.step(rec.final_state, h);
        } catch (const numerical_blowup& e) {
            rec.blowup = BlowupInfo{e.time(), e.what()};
            break;
        }
        rec.final_state.set_time(t0 + s * h);
        rec.steps = s;
        if (s % ts.record_every == 0 || s == n)
            rec.series.push_back(sample_norms(rec.final_state, norm));
        if (ts.snapshot_every > 0 && (s % ts.snapshot_every == 0 || s == n))
            rec.snapshots.push_back(rec.final_state);
    }
    return rec;
}

// As etd_run, but a blowup is rethrown as numerical_blowup.
inline RunRecord etd_integrate(const SpectralField& theta0, const CouplingSymbol& P, double gamma,
                               const TimeStepConfig& ts, const FnNorm* norm = nullptr) {
    auto rec = etd_run(theta0, P, gamma, ts, norm);
    if (rec.blowup)
        throw numerical_blowup(rec.blowup->message, rec.blowup->time);
    return rec;
}

// States at the given nodes (starting at 0), each gap covered with steps <= dt.
inline FieldPath etd_path(const SpectralField& theta0, const CouplingSymbol& P, double gamma, Scheme scheme,
                          bool dealias, double dt, const std::vector<double>& times) {
    validate_nodes(times, "etd_path");
    if (!(dt > 0.0))
        throw config_error("time.dt must be > 0");
    const EtdStepper stepper(P, gamma, scheme, dealias);
    FieldPath path{times, {}};
    path.states.reserve(times.size());
    SpectralField u = theta0;
    const double t0 = theta0.time();
    path.states.push_back(u);
    for (std::size_t m = 1; m < times.size(); ++m) {
        u = stepper.advance(u, times[m] - times[m - 1], dt);
        u.set_time(t0 + times[m]);
        path.states.push_back(u);
    }
    return path;
}

} // namespace fbm
