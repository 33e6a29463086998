#pragma once

// Closed-form constant equilibria and a-priori bound constants.
// The L1 cap for v uses (b4)_- in its denominator, consistent with the
// L1-boundedness hypothesis; one published variant of that display has
// (b3)_- instead.

#include <chemolv/hypotheses.hpp>
#include <chemolv/model.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace chemolv {

struct ConstantState {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
};

namespace detail {

inline double chemical_level(const ModelParams& p, double u, double v) {
    return (p.k * u + p.l * v) / p.lambda;
}

/// Positive root of A x^2 - a x - c = 0 with c = coupling * m >= 0, i.e.
/// (a + sqrt(a^2 + 4 A c)) / (2 A). With zero coupling this is exactly a / A.
inline double quadratic_cap(double a, double self, double coupling, double m) {
    if (coupling == 0.0) return a / self;
    return (a + std::sqrt(a * a + 4.0 * self * coupling * m)) / (2.0 * self);
}

}  // namespace detail

/// Interior constant equilibrium of the homogeneous kinetics. Returns the
/// algebraic solution; its components are positive only inside the
/// coexistence region. Throws on a singular determinant (exact zero test).
[[nodiscard]] inline ConstantState coexistence_state(const ModelParams& p) {
    const double det = p.b2_eff() * p.a1_eff() - p.a2_eff() * p.b1_eff();
    if (det == 0.0) throw PreconditionError("coexistence_state: singular determinant");
    const double u = (p.a0 * p.b2_eff() - p.b0 * p.a2_eff()) / det;
    const double v = (p.a0 * p.b1_eff() - p.b0 * p.a1_eff()) / (-det);
    return {u, v, detail::chemical_level(p, u, v)};
}

/// Limit of the exclusion regime: u extinct, v at its nonlocal carrying capacity.
[[nodiscard]] inline ConstantState exclusion_state(const ModelParams& p) {
    const double den = p.b2_eff();
    if (!(den > 0.0)) throw PreconditionError("exclusion_state: b2 + |Omega| b4 must be positive");
    const double v = p.b0 / den;
    return {0.0, v, p.l * v / p.lambda};
}

/// (u-only state, v-only state).
[[nodiscard]] inline std::pair<ConstantState, ConstantState> semi_trivial_states(const ModelParams& p) {
    const double den = p.a1_eff();
    if (!(den > 0.0)) throw PreconditionError("semi_trivial_states: a1 + |Omega| a3 must be positive");
    const double u = p.a0 / den;
    return {{u, 0.0, p.k * u / p.lambda}, exclusion_state(p)};
}

// -----------------------------------------------------------------------------
// A-priori bounds
// -----------------------------------------------------------------------------

/// Pointwise bound ingredients. The caps bound sup u and sup v for all time.
struct LinfBounds {
    double m00 = 0.0;
    double m01 = 0.0;
    double m02 = 0.0;
    double l_const = 0.0;
    double cap_u = 0.0;
    double cap_v = 0.0;
};

/// Requires H1. sup_u0/sup_v0 are the sup norms of the initial data.
[[nodiscard]] inline LinfBounds linf_bounds(const ModelParams& p, double sup_u0, double sup_v0) {
    const double om = p.omega_measure;
    const double cu_k = p.chi1 * p.k / p.d3, cu_l = p.chi1 * p.l / p.d3;
    const double cv_k = p.chi2 * p.k / p.d3, cv_l = p.chi2 * p.l / p.d3;

    const double a_self = p.a1 - cu_k - om * negative_part(p.a3);
    const double a_coupling = negative_part(p.a2) + om * negative_part(p.a4) + cu_l;
    const double b_coupling = negative_part(p.b1) + om * negative_part(p.b3) + cv_k;
    const double b_self = p.b2 - cv_l - om * negative_part(p.b4);

    LinfBounds b;
    b.l_const = std::min(
        p.a1 - p.k * (p.chi1 + p.chi2) / p.d3 - om * (negative_part(p.a3) + negative_part(p.b3)) - negative_part(p.b1),
        p.b2 - p.l * (p.chi2 + p.chi1) / p.d3 - om * (negative_part(p.b4) + negative_part(p.a4)) - negative_part(p.a2));
    if (!check_h1(p).holds || !(b.l_const > 0.0)) {
        throw PreconditionError("linf_bounds: requires H1");
    }
    const double s = p.a0 + p.b0;
    b.m00 = std::max(sup_u0 * sup_v0, s * s / (4.0 * b.l_const * b.l_const));
    b.m01 = detail::quadratic_cap(p.a0, a_self, a_coupling, b.m00);
    b.m02 = detail::quadratic_cap(p.b0, b_self, b_coupling, b.m00);
    b.cap_u = std::max(sup_u0, b.m01);
    b.cap_v = std::max(sup_v0, b.m02);
    return b;
}

/// Mass bound ingredients for the locally competitive case.
struct L1Bounds {
    double m_l1 = 0.0;
    double mass_u_cap = 0.0;
    double mass_v_cap = 0.0;
};

/// Requires H2 and a2, b1 >= 0.
[[nodiscard]] inline L1Bounds l1_bounds(const ModelParams& p, double mass_u0, double mass_v0) {
    if (!check_h2(p).holds) throw PreconditionError("l1_bounds: requires H2");
    if (p.a2 < 0.0 || p.b1 < 0.0) throw PreconditionError("l1_bounds: requires a2 >= 0 and b1 >= 0");
    const double om = p.omega_measure;
    const double du = p.a1 - om * (negative_part(p.a3) + negative_part(p.b3));
    const double dv = p.b2 - om * (negative_part(p.b4) + negative_part(p.a4));
    const double s = p.a0 + p.b0;

    L1Bounds b;
    b.m_l1 = std::max(mass_u0 * mass_v0, s * s * om * om / (4.0 * std::min(du * du, dv * dv)));
    const double a_self = (p.a1 - om * negative_part(p.a3)) / om;
    const double b_self = (p.b2 - om * negative_part(p.b4)) / om;
    b.mass_u_cap = std::max(mass_u0, detail::quadratic_cap(p.a0, a_self, negative_part(p.a4), b.m_l1));
    b.mass_v_cap = std::max(mass_v0, detail::quadratic_cap(p.b0, b_self, negative_part(p.b3), b.m_l1));
    return b;
}

/// Coefficients of the total-mass dissipation inequality. min(alpha, beta) > 0
/// is equivalent to H3.
[[nodiscard]] inline std::pair<double, double> alpha_beta(const ModelParams& p) {
    const double om = p.omega_measure;
    const double shared =
        0.5 * (negative_part(p.a2) + negative_part(p.b1) + om * (negative_part(p.a4) + negative_part(p.b3)));
    return {p.a1 - shared - om * negative_part(p.a3), p.b2 - shared - om * negative_part(p.b4)};
}

[[nodiscard]] inline double mass_sum_cap(const ModelParams& p, double mass_sum_0) {
    const auto [alpha, beta] = alpha_beta(p);
    const double m = std::min(alpha, beta);
    if (!(m > 0.0)) throw PreconditionError("mass_sum_cap: requires min(alpha, beta) > 0");
    return std::max(mass_sum_0, 2.0 * p.omega_measure * std::max(p.a0, p.b0) / m);
}

}  // namespace chemolv
