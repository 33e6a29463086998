#pragma once

// First-order IMEX time stepping for the two-species system.
// One step of size h, starting from (u, v) with w already consistent:
// 1. explicit:  u* = u + h ( -div F_u + R_u ),  F_u = chi1 u_up w_x  (upwind by sign of w_x)
// 2. implicit:  (I - h d1 Lap_h) u_new = u*    (same for v)
// 3. w_new from (lambda I - d3 Lap_h) w = k u_new + l v_new
// Face fluxes at the two boundary faces are zero, so the scheme conserves
// dx * sum(u) exactly up to the reaction contribution.

#include <chemolv/diagnostics.hpp>
#include <chemolv/elliptic.hpp>
#include <chemolv/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace chemolv {

struct StepperConfig {
    double dt = 1e-2;
    double t_end = 1.0;
    double cfl_safety = 0.5;
    bool positivity_clip = false;
    std::size_t record_every = 1;
    double blowup_guard = 1e8;
    /// Stop early once detect_steady(steady_tol, steady_window) certifies the
    /// recorded trace. Disabled when steady_tol <= 0.
    double steady_tol = 0.0;
    double steady_window = 0.0;
    /// Test hook: with reactions off only transport and diffusion act.
    bool enable_reactions = true;
};

/// Thrown when the step size exceeds the advection or reaction limit.
class CflViolation : public NumericalGuardError {
public:
    CflViolation(const std::string& constraint, double dt, double admissible)
        : NumericalGuardError(message(constraint, dt, admissible)),
          constraint_(constraint),
          admissible_dt_(admissible) {}

    [[nodiscard]] const std::string& constraint() const noexcept { return constraint_; }
    [[nodiscard]] double admissible_dt() const noexcept { return admissible_dt_; }

private:
    static std::string message(const std::string& constraint, double dt, double admissible) {
        std::ostringstream os;
        os << "time step " << dt << " violates the " << constraint << " limit; use dt <= " << admissible;
        return os.str();
    }

    std::string constraint_;
    double admissible_dt_;
};

struct ReactionTerms {
    Field ru;
    Field rv;
};

[[nodiscard]] inline std::pair<double, double> nonlocal_integrals(const FieldState& s, const Grid1D& grid) {
    return {integrate(s.u, grid), integrate(s.v, grid)};
}

[[nodiscard]] inline ReactionTerms reaction_terms(const FieldState& s, const ModelParams& p, const Grid1D& grid) {
    const auto [mu, mv] = nonlocal_integrals(s, grid);
    const std::size_t n = s.u.size();
    ReactionTerms r{Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double u = s.u[i], v = s.v[i];
        r.ru[i] = u * (p.a0 - p.a1 * u - p.a2 * v - p.a3 * mu - p.a4 * mv);
        r.rv[i] = v * (p.b0 - p.b1 * u - p.b2 * v - p.b3 * mu - p.b4 * mv);
    }
    return r;
}

/// Face fluxes chi * u_up * (w_{i} - w_{i-1}) / dx for faces 0..n; faces 0
/// and n lie on the boundary and carry zero flux.
[[nodiscard]] inline Field chemotaxis_flux(std::span<const double> u, std::span<const double> w, double chi,
                                           const Grid1D& grid) {
    const std::size_t n = u.size();
    Field f(n + 1, 0.0);
    const double dx = grid.dx();
    for (std::size_t j = 1; j < n; ++j) {
        const double grad = (w[j] - w[j - 1]) / dx;
        const double up = grad > 0.0 ? u[j - 1] : u[j];
        f[j] = chi * up * grad;
    }
    return f;
}

// -----------------------------------------------------------------------------
// Initial data
// -----------------------------------------------------------------------------

[[nodiscard]] inline Field constant_field(const Grid1D& grid, double c) { return Field(grid.n_cells(), c); }

/// c + amplitude * sign * cos(mode * pi * x / length)
[[nodiscard]] inline Field cosine_field(const Grid1D& grid, double c, double amplitude, int mode, double sign = 1.0) {
    Field f(grid.n_cells());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = c + sign * amplitude * std::cos(mode * std::numbers::pi * grid.center(i) / grid.length());
    }
    return f;
}

/// height * exp(-((x - center) / width)^2)
[[nodiscard]] inline Field bump_field(const Grid1D& grid, double center, double width, double height) {
    Field f(grid.n_cells());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double z = (grid.center(i) - center) / width;
        f[i] = height * std::exp(-z * z);
    }
    return f;
}

// -----------------------------------------------------------------------------
// Stepper
// -----------------------------------------------------------------------------

class Stepper {
public:
    Stepper(const ModelParams& p, const Grid1D& grid, const StepperConfig& cfg)
        : p_(p), grid_(grid), cfg_(cfg), elliptic_(p, grid) {
        if (std::abs(p.omega_measure - grid.length()) > 1e-12 * grid.length()) {
            throw ConfigError("omega_measure must equal the grid length");
        }
        for (double x : {p.d1, p.d2, p.d3, p.lambda}) {
            if (!(x > 0.0)) throw ConfigError("diffusion coefficients and lambda must be positive");
        }
        if (p.chi1 < 0.0 || p.chi2 < 0.0) throw ConfigError("chemotactic sensitivities must be nonnegative");
        if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
        if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
        if (cfg.record_every == 0) throw ConfigError("record_every must be >= 1");
    }

    [[nodiscard]] const EllipticOperator& elliptic() const noexcept { return elliptic_; }
    [[nodiscard]] double clipped_mass() const noexcept { return clipped_mass_; }

    /// Builds a consistent state (w solved) from nonnegative u, v.
    [[nodiscard]] FieldState initial_state(Field u, Field v, double t = 0.0) const {
        if (u.size() != grid_.n_cells() || v.size() != grid_.n_cells()) {
            throw ConfigError("initial data size does not match the grid");
        }
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (!(u[i] >= 0.0) || !(v[i] >= 0.0)) throw ConfigError("initial data must be nonnegative");
        }
        FieldState s;
        s.t = t;
        s.w = elliptic_.solve_w(u, v);
        s.u = std::move(u);
        s.v = std::move(v);
        return s;
    }

    /// Largest step satisfying both the advection and reaction limits at s,
    /// and the name of the binding one.
    [[nodiscard]] std::pair<double, std::string> admissible_dt(const FieldState& s) const {
        const double dx = grid_.dx();
        double grad = 0.0;
        for (std::size_t j = 1; j < s.w.size(); ++j) grad = std::max(grad, std::abs(s.w[j] - s.w[j - 1]) / dx);
        const double speed = std::max(p_.chi1, p_.chi2) * grad;
        const double adv = speed > 0.0 ? cfg_.cfl_safety * dx / speed : std::numeric_limits<double>::infinity();

        double jac = 0.0;
        if (cfg_.enable_reactions) {
            const auto [mu, mv] = nonlocal_integrals(s, grid_);
            for (std::size_t i = 0; i < s.u.size(); ++i) {
                const double u = s.u[i], v = s.v[i];
                const double ju =
                    p_.a0 - 2.0 * p_.a1 * u - p_.a2 * v - p_.a3 * mu - p_.a4 * mv - p_.a3 * dx * u;
                const double jv =
                    p_.b0 - p_.b1 * u - 2.0 * p_.b2 * v - p_.b3 * mu - p_.b4 * mv - p_.b4 * dx * v;
                jac = std::max({jac, std::abs(ju), std::abs(jv)});
            }
        }
        const double rea = jac > 0.0 ? 1.0 / jac : std::numeric_limits<double>::infinity();
        return adv <= rea ? std::pair{adv, std::string("advection CFL")} : std::pair{rea, std::string("reaction")};
    }

    /// Advances s by h (defaults to cfg.dt). s.w must be consistent with s.u, s.v.
    void advance(FieldState& s, std::optional<double> step = std::nullopt) {
        const double h = step.value_or(cfg_.dt);
        const auto [limit, which] = admissible_dt(s);
        if (h > limit) throw CflViolation(which, h, limit);

        const double dx = grid_.dx();
        const std::size_t n = s.u.size();
        Field us(n), vs(n);
        const Field fu = chemotaxis_flux(s.u, s.w, p_.chi1, grid_);
        const Field fv = chemotaxis_flux(s.v, s.w, p_.chi2, grid_);
        for (std::size_t i = 0; i < n; ++i) {
            us[i] = s.u[i] - h * (fu[i + 1] - fu[i]) / dx;
            vs[i] = s.v[i] - h * (fv[i + 1] - fv[i]) / dx;
        }
        if (cfg_.enable_reactions) {
            const auto r = reaction_terms(s, p_, grid_);
            for (std::size_t i = 0; i < n; ++i) {
                us[i] += h * r.ru[i];
                vs[i] += h * r.rv[i];
            }
        }
        const auto& [du, dv] = diffusion_ops(h);
        s.u = du.solve(us);
        s.v = dv.solve(vs);
        if (cfg_.positivity_clip) {
            for (auto* f : {&s.u, &s.v}) {
                for (double& x : *f) {
                    if (x < 0.0) {
                        clipped_mass_ += -x * dx;
                        x = 0.0;
                    }
                }
            }
        }
        s.w = elliptic_.solve_w(s.u, s.v);
        s.t += h;
    }

private:
    const std::pair<NeumannOperator, NeumannOperator>& diffusion_ops(double h) {
        auto it = diffusion_.find(h);
        if (it == diffusion_.end()) {
            it = diffusion_
                     .emplace(h, std::pair{NeumannOperator(grid_, h * p_.d1, 1.0),
                                           NeumannOperator(grid_, h * p_.d2, 1.0)})
                     .first;
        }
        return it->second;
    }

    ModelParams p_;
    Grid1D grid_;
    StepperConfig cfg_;
    EllipticOperator elliptic_;
    std::map<double, std::pair<NeumannOperator, NeumannOperator>> diffusion_;
    double clipped_mass_ = 0.0;
};

/// Single step from a consistent state.
[[nodiscard]] inline FieldState step(const FieldState& state, const ModelParams& p, const Grid1D& grid,
                                     const StepperConfig& cfg) {
    Stepper st(p, grid, cfg);
    FieldState s = state;
    st.advance(s);
    return s;
}

// -----------------------------------------------------------------------------
// Driver
// -----------------------------------------------------------------------------

struct SimulationResult {
    TrajectoryRecord record;
    FieldState final_state;
};

/// A step was rejected part-way through a run. Carries the trace up to and
/// including the last accepted state.
class SimulationAborted : public CflViolation {
public:
    SimulationAborted(const CflViolation& cause, double dt, TrajectoryRecord partial)
        : CflViolation(cause.constraint(), dt, cause.admissible_dt()), record_(std::move(partial)) {}

    [[nodiscard]] const TrajectoryRecord& record() const noexcept { return record_; }

private:
    TrajectoryRecord record_;
};

/**
 * Integrates from state0 to cfg.t_end, sampling every cfg.record_every steps
 * and at the final time. Stops early on blow-up (any value above
 * cfg.blowup_guard or non-finite) or, when enabled, once the recorded trace is
 * certified steady. A rejected step surfaces as SimulationAborted.
 */
[[nodiscard]] inline SimulationResult run_simulation(const FieldState& state0, const ModelParams& p,
                                                     const Grid1D& grid, const StepperConfig& cfg,
                                                     std::vector<NamedReference> refs = {}) {
    Stepper st(p, grid, cfg);
    SimulationResult out;
    out.record.references = std::move(refs);
    FieldState s = st.initial_state(state0.u, state0.v, state0.t);
    const double t0 = s.t;
    out.record.samples.push_back(make_sample(s, grid, out.record.references));

    const double duration = cfg.t_end - t0;
    const std::size_t n_steps =
        duration > 0.0 ? static_cast<std::size_t>(std::ceil(duration / cfg.dt - 1e-9)) : std::size_t{0};

    const auto tripped = [&](const FieldState& x) {
        for (const Field* f : {&x.u, &x.v, &x.w}) {
            for (double y : *f) {
                if (!std::isfinite(y) || y > cfg.blowup_guard) return true;
            }
        }
        return false;
    };

    for (std::size_t i = 1; i <= n_steps; ++i) {
        const bool last = i == n_steps;
        const double target = last ? cfg.t_end : t0 + static_cast<double>(i) * cfg.dt;
        const double h = last ? target - s.t : cfg.dt;
        try {
            st.advance(s, h);
        } catch (const CflViolation& e) {
            out.record.termination = Termination::step_rejected;
            out.record.clipped_mass = st.clipped_mass();
            if (out.record.samples.back().t != s.t) {
                out.record.samples.push_back(make_sample(s, grid, out.record.references));
            }
            throw SimulationAborted(e, h, std::move(out.record));
        }
        s.t = target;

        if (tripped(s)) {
            out.record.samples.push_back(make_sample(s, grid, out.record.references));
            out.record.termination = Termination::blow_up;
            break;
        }
        if (i % cfg.record_every == 0 || last) {
            out.record.samples.push_back(make_sample(s, grid, out.record.references));
            if (cfg.steady_tol > 0.0 && !last && out.record.span() >= cfg.steady_window &&
                detect_steady(out.record, cfg.steady_tol, cfg.steady_window).steady) {
                out.record.termination = Termination::steady_state;
                break;
            }
        }
    }
    out.record.clipped_mass = st.clipped_mass();
    out.final_state = std::move(s);
    return out;
}

}  // namespace chemolv
