#pragma once

// Parameter-region checks for global existence, coexistence and
// competitive exclusion.
// Every check returns a HypothesisReport holding one signed slack per
// inequality, oriented so that "lhs > rhs" becomes "slack > 0". Strict
// inequalities fail at slack 0; non-strict ones pass at slack 0.
// A note on the sixth hypothesis (check_h6): its published expanded form has a
// chi2*l*(n-2)/(d3*(n+2)) term in the v-inequality where the g-function it is
// stated to be equivalent to has chi2*k*(n-2)/(d3*(n+2)). The check evaluates
// f(n/2) and g(n/2) directly, so the g-function form is the one implemented.

#include <chemolv/model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace chemolv {

struct Margin {
    std::string label;
    double slack = 0.0;
    bool strict = true;

    [[nodiscard]] bool satisfied() const noexcept { return strict ? slack > 0.0 : slack >= 0.0; }
};

struct HypothesisReport {
    std::string name;
    bool holds = false;
    std::vector<Margin> margins;
    std::vector<std::string> notes;

    [[nodiscard]] const Margin* find(const std::string& label) const {
        for (const auto& m : margins) {
            if (m.label == label) return &m;
        }
        return nullptr;
    }
};

namespace detail {

inline HypothesisReport finish(std::string name, std::vector<Margin> margins,
                               std::vector<std::string> notes = {}) {
    HypothesisReport r;
    r.name = std::move(name);
    r.margins = std::move(margins);
    r.notes = std::move(notes);
    r.holds = std::all_of(r.margins.begin(), r.margins.end(),
                          [](const Margin& m) { return m.satisfied(); });
    return r;
}

inline void append(std::vector<Margin>& out, const HypothesisReport& r, const std::string& prefix) {
    for (const auto& m : r.margins) out.push_back({prefix + m.label, m.slack, m.strict});
}

// chi-dependent ratios that recur in nearly every condition
inline double cu_k(const ModelParams& p) { return p.chi1 * p.k / p.d3; }
inline double cu_l(const ModelParams& p) { return p.chi1 * p.l / p.d3; }
inline double cv_k(const ModelParams& p) { return p.chi2 * p.k / p.d3; }
inline double cv_l(const ModelParams& p) { return p.chi2 * p.l / p.d3; }

}  // namespace detail

// -----------------------------------------------------------------------------
// Global existence hypotheses
// -----------------------------------------------------------------------------

/// Pointwise (rectangle-method) bound hypothesis.
[[nodiscard]] inline HypothesisReport check_h1(const ModelParams& p) {
    const double om = p.omega_measure;
    const double chi_sum = (p.chi1 + p.chi2) / p.d3;
    const double mu = p.a1 - (negative_part(p.b1) + om * (negative_part(p.a3) + negative_part(p.b3)) +
                              p.k * chi_sum);
    const double mv = p.b2 - (negative_part(p.a2) + om * (negative_part(p.a4) + negative_part(p.b4)) +
                              p.l * chi_sum);
    return detail::finish("H1", {{"u", mu, true}, {"v", mv, true}});
}

/// L1 bound hypothesis, locally competitive case.
[[nodiscard]] inline HypothesisReport check_h2(const ModelParams& p) {
    const double om = p.omega_measure;
    const double mu = p.a1 - om * (negative_part(p.a3) + negative_part(p.b3));
    const double mv = p.b2 - om * (negative_part(p.a4) + negative_part(p.b4));
    return detail::finish("H2", {{"u", mu, true}, {"v", mv, true}});
}

/// L1 bound hypothesis, general case.
[[nodiscard]] inline HypothesisReport check_h3(const ModelParams& p) {
    const double om = p.omega_measure;
    const double local = 0.5 * (negative_part(p.a2) + negative_part(p.b1));
    const double cross = 0.5 * om * (negative_part(p.a4) + negative_part(p.b3));
    const double mu = p.a1 - local - om * negative_part(p.a3) - cross;
    const double mv = p.b2 - local - om * negative_part(p.b4) - cross;
    return detail::finish("H3", {{"u", mu, true}, {"v", mv, true}});
}

[[nodiscard]] inline HypothesisReport check_h4(const ModelParams& p, int n_dim = 1) {
    if (n_dim < 1) throw PreconditionError("check_h4: n_dim must be >= 1");
    const double n = n_dim;
    const double s = (n - 2.0) / (p.d3 * n);
    return detail::finish("H4", {
                                    {"a1", p.a1 - std::max(0.0, p.chi1 * p.k * s), true},
                                    {"a2", p.a2 - std::max(0.0, p.chi1 * p.l * s), true},
                                    {"b2", p.b2 - std::max(0.0, p.chi2 * p.l * s), true},
                                    {"b1", p.b1 - std::max(0.0, p.chi2 * p.k * s), true},
                                });
}

[[nodiscard]] inline HypothesisReport check_h5(const ModelParams& p) {
    const double mu = p.a1 - (negative_part(p.a2) + (p.l + p.k) * p.chi1 / p.d3);
    const double mv = p.b2 - (negative_part(p.b1) + (p.l + p.k) * p.chi2 / p.d3);
    return detail::finish("H5", {{"u", mu, true}, {"v", mv, true}});
}

// -----------------------------------------------------------------------------
// The f/g functions governing L^gamma bounds
// -----------------------------------------------------------------------------

[[nodiscard]] inline double eval_f(const ModelParams& p, double gamma) {
    if (gamma == 0.0 || gamma == -1.0) throw PreconditionError("eval_f: gamma must differ from 0 and -1");
    const double g1 = gamma + 1.0;
    const double gm = gamma - 1.0;
    return p.a1 - gamma * negative_part(p.a2) / g1 - negative_part(p.b1) / g1 -
           p.chi1 * p.k * gm / (p.d3 * gamma) - p.chi1 * p.l * gm / (p.d3 * g1) -
           p.chi2 * p.k * gm / (p.d3 * gamma * g1);
}

[[nodiscard]] inline double eval_g(const ModelParams& p, double gamma) {
    if (gamma == 0.0 || gamma == -1.0) throw PreconditionError("eval_g: gamma must differ from 0 and -1");
    const double g1 = gamma + 1.0;
    const double gm = gamma - 1.0;
    return p.b2 - gamma * negative_part(p.b1) / g1 - negative_part(p.a2) / g1 -
           p.chi2 * p.l * gm / (p.d3 * gamma) - p.chi2 * p.k * gm / (p.d3 * g1) -
           p.chi1 * p.l * gm / (p.d3 * gamma * g1);
}

[[nodiscard]] inline HypothesisReport check_h6(const ModelParams& p, int n_dim = 1) {
    if (n_dim < 1) throw PreconditionError("check_h6: n_dim must be >= 1");
    const double half_n = 0.5 * n_dim;
    return detail::finish("H6", {{"u", eval_f(p, half_n), true}, {"v", eval_g(p, half_n), true}},
                          {"v-inequality evaluated as g(n/2)"});
}

/// Supremum of exponents for which L^gamma bounds follow in the fully
/// competitive case. x/0 is +infinity.
[[nodiscard]] inline double gamma_star(const ModelParams& p) {
    if (!(std::min({p.a1, p.b1, p.a2, p.b2}) > 0.0)) {
        throw PreconditionError("gamma_star: requires a1, b1, a2, b2 > 0");
    }
    const auto ratio = [](double num, double coef) {
        const double den = positive_part(num - coef);
        return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
    };
    return std::min({ratio(p.chi1 * p.k, p.a1), ratio(p.chi2 * p.l, p.b2), ratio(p.chi1 * p.l, p.a2),
                     ratio(p.chi2 * p.k, p.b1)});
}

// -----------------------------------------------------------------------------
// Asymptotic regimes
// -----------------------------------------------------------------------------

namespace detail {

inline Margin u_self_limitation(const ModelParams& p) {
    return {"u_self_limitation", p.a1 - (2.0 * cu_k(p) + p.omega_measure * std::abs(p.a3)), true};
}

inline Margin v_self_limitation(const ModelParams& p) {
    return {"v_self_limitation", p.b2 - (2.0 * cv_l(p) + p.omega_measure * std::abs(p.b4)), true};
}

// a2_eff/b2_eff < a0/b0 < a1_eff/b1_eff, as two margins.
inline void weak_competition(const ModelParams& p, std::vector<Margin>& out, std::vector<std::string>& notes) {
    const double ratio = p.a0 / p.b0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (p.b2_eff() > 0.0) {
        out.push_back({"weak_competition_lower", ratio - p.a2_eff() / p.b2_eff(), true});
    } else {
        out.push_back({"weak_competition_lower", nan, true});
        notes.emplace_back("weak_competition_lower: degenerate denominator b2 + |Omega| b4 <= 0");
    }
    if (p.b1_eff() > 0.0) {
        out.push_back({"weak_competition_upper", p.a1_eff() / p.b1_eff() - ratio, true});
    } else {
        out.push_back({"weak_competition_upper", nan, true});
        notes.emplace_back("weak_competition_upper: degenerate denominator b1 + |Omega| b3 <= 0");
    }
}

}  // namespace detail

/// Coexistence in the general competitive-cooperative case.
[[nodiscard]] inline HypothesisReport check_coexistence_general(const ModelParams& p) {
    const double om = p.omega_measure;
    std::vector<Margin> m;
    std::vector<std::string> notes;
    m.push_back(detail::u_self_limitation(p));
    m.push_back(detail::v_self_limitation(p));
    detail::weak_competition(p, m, notes);
    const double lhs = (p.a1 - 2.0 * detail::cu_k(p) - om * std::abs(p.a3)) *
                       (p.b2 - 2.0 * detail::cv_l(p) - om * std::abs(p.b4));
    const double rhs = (std::abs(p.a2) + om * std::abs(p.a4) + detail::cu_l(p)) *
                       (std::abs(p.b1) + om * std::abs(p.b3) + detail::cv_k(p));
    m.push_back({"coupling_product", lhs - rhs, true});
    detail::append(m, check_h1(p), "H1.");
    return detail::finish("coexistence_general", std::move(m), std::move(notes));
}

[[nodiscard]] inline bool is_fully_competitive(const ModelParams& p) noexcept {
    return p.a1 > 0 && p.a2 > 0 && p.a3 > 0 && p.a4 > 0 && p.b1 > 0 && p.b2 > 0 && p.b3 > 0 && p.b4 > 0;
}

/// Coexistence in the competitive case. Notes record whether the parameters
/// are in fact fully competitive; the margins are evaluated regardless.
[[nodiscard]] inline HypothesisReport check_coexistence_competitive(const ModelParams& p) {
    const double om = p.omega_measure;
    std::vector<Margin> m;
    std::vector<std::string> notes;
    m.push_back(detail::u_self_limitation(p));
    m.push_back(detail::v_self_limitation(p));
    detail::weak_competition(p, m, notes);
    m.push_back({"a2_dominates_chemotaxis", p.a2 - detail::cu_l(p), false});
    m.push_back({"b1_dominates_chemotaxis", p.b1 - detail::cv_k(p), false});
    const double lhs = (p.a1 - 2.0 * detail::cu_k(p) - om * p.a3) * (p.b2 - 2.0 * detail::cv_l(p) - om * p.b4);
    m.push_back({"coupling_product", lhs - p.a2_eff() * p.b1_eff(), true});
    notes.emplace_back(is_fully_competitive(p) ? "competitive_case: true" : "competitive_case: false");
    return detail::finish("coexistence_competitive", std::move(m), std::move(notes));
}

/// Both branches of the final exclusion inequality, as lhs - rhs.
struct ExclusionBranches {
    double strong_b1;  ///< branch used when b1 > chi2 k / d3
    double weak_b1;    ///< branch used when b1 <= chi2 k / d3
};

[[nodiscard]] inline ExclusionBranches exclusion_branch_margins(const ModelParams& p) {
    const double om = p.omega_measure;
    const double lhs = (p.a1 - detail::cu_k(p) - om * negative_part(p.a3)) *
                       (p.b2 - 2.0 * detail::cv_l(p) - om * std::abs(p.b4)) * p.b0;
    const double v_cap = p.b2 - detail::cv_l(p) - om * negative_part(p.b4);
    const double tail = (p.b4 + detail::cv_l(p)) * p.a0;
    const double rhs_strong = v_cap * (p.b1 + p.b3 * om) * p.a0 + om * negative_part(p.b3) * tail;
    const double rhs_weak = v_cap * (om * positive_part(p.b3) + detail::cv_k(p)) * p.a0 +
                            (detail::cv_k(p) - p.b1 + om * negative_part(p.b3)) * tail;
    return {lhs - rhs_strong, lhs - rhs_weak};
}

/// Competitive exclusion of u. Throws when a2 + a4 |Omega| = 0.
[[nodiscard]] inline HypothesisReport check_exclusion(const ModelParams& p) {
    const double om = p.omega_measure;
    const double denom = p.a2 + p.a4 * om;
    if (denom == 0.0) throw PreconditionError("check_exclusion: a2 + a4 |Omega| = 0");

    std::vector<Margin> m;
    std::vector<std::string> notes;
    m.push_back(detail::v_self_limitation(p));
    m.push_back({"a4_nonnegative", p.a4, false});
    m.push_back({"a2_dominates_chemotaxis", p.a2 - detail::cu_l(p), false});
    m.push_back({"u_self_limitation", p.a1 - (detail::cu_k(p) + om * negative_part(p.a3)), true});
    m.push_back({"v_growth_advantage", p.b0 - p.b2_eff() / denom * p.a0, false});

    const auto branches = exclusion_branch_margins(p);
    if (p.b1 > detail::cv_k(p)) {
        m.push_back({"invasion_product", branches.strong_b1, true});
        notes.emplace_back("branch: b1 > chi2 k / d3");
    } else {
        m.push_back({"invasion_product", branches.weak_b1, true});
        notes.emplace_back("branch: b1 <= chi2 k / d3");
    }
    detail::append(m, check_h1(p), "H1.");
    return detail::finish("exclusion", std::move(m), std::move(notes));
}

// -----------------------------------------------------------------------------
// Classification
// -----------------------------------------------------------------------------

enum class Asymptotics { coexistence_general, coexistence_competitive, exclusion, unclassified };

[[nodiscard]] inline const char* to_string(Asymptotics a) noexcept {
    switch (a) {
        case Asymptotics::coexistence_general: return "coexistence_general";
        case Asymptotics::coexistence_competitive: return "coexistence_competitive";
        case Asymptotics::exclusion: return "exclusion";
        case Asymptotics::unclassified: return "unclassified";
    }
    return "unclassified";
}

struct RegimeClassification {
    std::vector<std::string> global_existence;  ///< subset of {H1, H2+H4, H3+H4, H3+H5, H3+H6}
    Asymptotics asymptotics = Asymptotics::unclassified;
};

struct HypothesisSuite {
    int n_dim = 1;
    std::vector<HypothesisReport> reports;
    RegimeClassification regime;

    [[nodiscard]] const HypothesisReport* find(const std::string& name) const {
        for (const auto& r : reports) {
            if (r.name == name) return &r;
        }
        return nullptr;
    }
};

/// Runs every check and classifies the regime. Coexistence takes precedence
/// over exclusion; the competitive-case coexistence result is only claimed for
/// fully competitive parameters.
[[nodiscard]] inline HypothesisSuite check_all(const ModelParams& p, int n_dim = 1) {
    HypothesisSuite s;
    s.n_dim = n_dim;
    const auto h1 = check_h1(p);
    const auto h2 = check_h2(p);
    const auto h3 = check_h3(p);
    const auto h4 = check_h4(p, n_dim);
    const auto h5 = check_h5(p);
    const auto h6 = check_h6(p, n_dim);
    const auto coex = check_coexistence_general(p);
    const auto comp = check_coexistence_competitive(p);
    s.reports = {h1, h2, h3, h4, h5, h6, coex, comp};

    bool excl_holds = false;
    try {
        auto ex = check_exclusion(p);
        excl_holds = ex.holds;
        s.reports.push_back(std::move(ex));
    } catch (const PreconditionError& e) {
        HypothesisReport ex;
        ex.name = "exclusion";
        ex.notes.emplace_back(e.what());
        s.reports.push_back(std::move(ex));
    }

    auto& ge = s.regime.global_existence;
    if (h1.holds) ge.emplace_back("H1");
    if (h2.holds && h4.holds) ge.emplace_back("H2+H4");
    if (h3.holds && h4.holds) ge.emplace_back("H3+H4");
    if (h3.holds && h5.holds) ge.emplace_back("H3+H5");
    if (h3.holds && h6.holds) ge.emplace_back("H3+H6");

    if (coex.holds) {
        s.regime.asymptotics = Asymptotics::coexistence_general;
    } else if (comp.holds && is_fully_competitive(p)) {
        s.regime.asymptotics = Asymptotics::coexistence_competitive;
    } else if (excl_holds) {
        s.regime.asymptotics = Asymptotics::exclusion;
    }
    return s;
}

}  // namespace chemolv
