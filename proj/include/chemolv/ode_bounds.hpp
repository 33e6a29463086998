#pragma once

// The four-dimensional "rectangle" ODE whose solution encloses the PDE
// solution between spatially constant upper and lower envelopes, and
// the quadratic caps that bound it.

#include <chemolv/diagnostics.hpp>
#include <chemolv/model.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace chemolv {

struct RectangleState {
    double t = 0.0;
    double u_hi = 0.0;
    double u_lo = 0.0;
    double v_hi = 0.0;
    double v_lo = 0.0;
};

/// Time derivative of (u_hi, u_lo, v_hi, v_lo).
struct RectangleRates {
    double u_hi = 0.0;
    double u_lo = 0.0;
    double v_hi = 0.0;
    double v_lo = 0.0;
};

[[nodiscard]] inline RectangleRates rectangle_rhs(const RectangleState& s, const ModelParams& p) {
    const double om = p.omega_measure;
    const auto a2 = SignedParts::of(p.a2), a3 = SignedParts::of(p.a3), a4 = SignedParts::of(p.a4);
    const auto b1 = SignedParts::of(p.b1), b3 = SignedParts::of(p.b3), b4 = SignedParts::of(p.b4);

    // kU + lV at the upper corner minus at the lower corner, grouped so that it
    // vanishes exactly on the diagonal
    const double spread = p.k * (s.u_hi - s.u_lo) + p.l * (s.v_hi - s.v_lo);
    const double cu = p.chi1 / p.d3, cv = p.chi2 / p.d3;

    const double a_self = p.a1 - om * a3.neg;
    const double a_coop = a2.neg + om * a4.neg;
    const double a_comp = a2.pos + om * a4.pos;
    const double b_self = p.b2 - om * b4.neg;
    const double b_coop = b1.neg + om * b3.neg;
    const double b_comp = b1.pos + om * b3.pos;

    RectangleRates r;
    r.u_hi = cu * s.u_hi * spread + s.u_hi * (p.a0 - a_self * s.u_hi - om * a3.pos * s.u_lo) +
             s.u_hi * (a_coop * s.v_hi - a_comp * s.v_lo);
    r.u_lo = -cu * s.u_lo * spread + s.u_lo * (p.a0 - a_self * s.u_lo - om * a3.pos * s.u_hi) +
             s.u_lo * (a_coop * s.v_lo - a_comp * s.v_hi);
    r.v_hi = cv * s.v_hi * spread + s.v_hi * (p.b0 - b_self * s.v_hi - om * b4.pos * s.v_lo) +
             s.v_hi * (b_coop * s.u_hi - b_comp * s.u_lo);
    r.v_lo = -cv * s.v_lo * spread + s.v_lo * (p.b0 - b_self * s.v_lo - om * b4.pos * s.v_hi) +
             s.v_lo * (b_coop * s.u_lo - b_comp * s.u_hi);
    return r;
}

struct RectangleTrace {
    std::vector<RectangleState> states;
    bool diverged = false;  ///< a component exceeded the divergence guard
};

/**
 * Classical RK4 with fixed step dt up to t_end, keeping every record_every-th
 * state plus the last. Requires ordered, nonnegative initial data.
 */
[[nodiscard]] inline RectangleTrace integrate_rectangles(const RectangleState& s0, const ModelParams& p, double dt,
                                                         double t_end, std::size_t record_every = 1,
                                                         double guard = 1e8) {
    if (!(s0.u_lo >= 0.0 && s0.v_lo >= 0.0 && s0.u_lo <= s0.u_hi && s0.v_lo <= s0.v_hi)) {
        throw PreconditionError("integrate_rectangles: initial data must satisfy 0 <= lo <= hi");
    }
    if (!(dt > 0.0)) throw PreconditionError("integrate_rectangles: dt must be positive");
    if (record_every == 0) record_every = 1;

    using Vec = std::array<double, 4>;
    const auto rhs = [&](const Vec& y) {
        const auto r = rectangle_rhs({0.0, y[0], y[1], y[2], y[3]}, p);
        return Vec{r.u_hi, r.u_lo, r.v_hi, r.v_lo};
    };
    const auto axpy = [](const Vec& y, double a, const Vec& k) {
        return Vec{y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
    };

    RectangleTrace trace;
    trace.states.push_back(s0);
    Vec y{s0.u_hi, s0.u_lo, s0.v_hi, s0.v_lo};
    const double duration = t_end - s0.t;
    const std::size_t n =
        duration > 0.0 ? static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)) : std::size_t{0};
    for (std::size_t i = 1; i <= n; ++i) {
        const bool last = i == n;
        const double t_prev = s0.t + static_cast<double>(i - 1) * dt;
        const double t_next = last ? t_end : s0.t + static_cast<double>(i) * dt;
        const double h = t_next - t_prev;
        const Vec k1 = rhs(y);
        const Vec k2 = rhs(axpy(y, 0.5 * h, k1));
        const Vec k3 = rhs(axpy(y, 0.5 * h, k2));
        const Vec k4 = rhs(axpy(y, h, k3));
        for (int c = 0; c < 4; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);

        const bool bad = std::any_of(y.begin(), y.end(), [&](double x) { return !std::isfinite(x) || x > guard; });
        if (bad || last || i % record_every == 0) trace.states.push_back({t_next, y[0], y[1], y[2], y[3]});
        if (bad) {
            trace.diverged = true;
            break;
        }
    }
    return trace;
}

// -----------------------------------------------------------------------------
// Quadratic envelope for the pair of differential inequalities
//   U' <= U (a0 - A1 U + A2 V),  V' <= V (b0 + B1 U - B2 V)
// -----------------------------------------------------------------------------

struct EnvelopeConstants {
    double a1_coef = 0.0;  ///< A1
    double a2_coef = 0.0;  ///< A2
    double b1_coef = 0.0;  ///< B1
    double b2_coef = 0.0;  ///< B2
    double a0 = 0.0;
    double b0 = 0.0;
};

struct Envelope {
    double m_const = 0.0;
    double cap_u = 0.0;
    double cap_v = 0.0;
};

/// Requires A1 > (B1)_+ and B2 > (A2)_+. The v-cap divides by 2 B2.
[[nodiscard]] inline Envelope quadratic_envelope(const EnvelopeConstants& c, double u_hi0, double v_hi0) {
    if (!(c.a1_coef > positive_part(c.b1_coef)) || !(c.b2_coef > positive_part(c.a2_coef))) {
        throw PreconditionError("envelope: requires A1 > (B1)_+ and B2 > (A2)_+");
    }
    const double s = c.a0 + c.b0;
    const double gap_u = c.a1_coef - c.b1_coef;
    const double gap_v = c.b2_coef - c.a2_coef;
    Envelope e;
    e.m_const = std::max(u_hi0 * v_hi0, s * s / (4.0 * std::min(gap_u * gap_u, gap_v * gap_v)));
    const double au = positive_part(c.a2_coef);
    const double bv = positive_part(c.b1_coef);
    const double root_u =
        au == 0.0 ? c.a0 / c.a1_coef
                  : (c.a0 + std::sqrt(c.a0 * c.a0 + 4.0 * c.a1_coef * au * e.m_const)) / (2.0 * c.a1_coef);
    const double root_v =
        bv == 0.0 ? c.b0 / c.b2_coef
                  : (c.b0 + std::sqrt(c.b0 * c.b0 + 4.0 * bv * c.b2_coef * e.m_const)) / (2.0 * c.b2_coef);
    e.cap_u = std::max(u_hi0, root_u);
    e.cap_v = std::max(v_hi0, root_v);
    return e;
}

/// The coefficients the rectangle system induces on its upper corner.
[[nodiscard]] inline EnvelopeConstants rectangle_envelope_constants(const ModelParams& p) {
    const double om = p.omega_measure;
    EnvelopeConstants c;
    c.a1_coef = p.a1 - p.k * p.chi1 / p.d3 - om * negative_part(p.a3);
    c.a2_coef = negative_part(p.a2) + om * negative_part(p.a4) + p.l * p.chi1 / p.d3;
    c.b1_coef = negative_part(p.b1) + om * negative_part(p.b3) + p.k * p.chi2 / p.d3;
    c.b2_coef = p.b2 - p.l * p.chi2 / p.d3 - om * negative_part(p.b4);
    c.a0 = p.a0;
    c.b0 = p.b0;
    return c;
}

// -----------------------------------------------------------------------------
// Enclosure check
// -----------------------------------------------------------------------------

struct EnclosureReport {
    double tol = 0.0;
    bool pass = true;
    double worst_violation = 0.0;  ///< max over samples of the largest bound excess
    double worst_time = 0.0;
    std::size_t violating_samples = 0;
    std::vector<double> per_sample;  ///< largest excess at each PDE sample (<= 0 means inside)
};

namespace detail {

inline RectangleState interpolate(const std::vector<RectangleState>& tr, double t) {
    if (tr.empty() || t < tr.front().t - 1e-12 || t > tr.back().t + 1e-12) {
        throw PreconditionError("check_enclosure: PDE time outside the rectangle trace");
    }
    auto it = std::lower_bound(tr.begin(), tr.end(), t, [](const RectangleState& s, double x) { return s.t < x; });
    if (it == tr.end()) return tr.back();
    if (it == tr.begin() || it->t == t) return *it;
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    const auto mix = [w](double x, double y) { return x + w * (y - x); };
    return {t, mix(a.u_hi, b.u_hi), mix(a.u_lo, b.u_lo), mix(a.v_hi, b.v_hi), mix(a.v_lo, b.v_lo)};
}

}  // namespace detail

/// Checks u_lo - tol <= min u, max u <= u_hi + tol (and the v analogues) at
/// every PDE sample, interpolating the rectangle trace linearly in time.
[[nodiscard]] inline EnclosureReport check_enclosure(const TrajectoryRecord& pde,
                                                     const std::vector<RectangleState>& rect, double tol) {
    EnclosureReport rep;
    rep.tol = tol;
    rep.worst_violation = -std::numeric_limits<double>::infinity();
    for (const auto& s : pde.samples) {
        const auto r = detail::interpolate(rect, s.t);
        const double excess =
            std::max({r.u_lo - s.u.min, s.u.max - r.u_hi, r.v_lo - s.v.min, s.v.max - r.v_hi});
        rep.per_sample.push_back(excess);
        if (excess > rep.worst_violation) {
            rep.worst_violation = excess;
            rep.worst_time = s.t;
        }
        if (excess > tol) ++rep.violating_samples;
    }
    rep.pass = rep.violating_samples == 0;
    return rep;
}

}  // namespace chemolv
