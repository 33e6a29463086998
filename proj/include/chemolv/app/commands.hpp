#pragma once

// Subcommand implementations. Each returns a JSON document plus a process exit
// code; the tool's main() only handles argument parsing and printing.

#include <chemolv/app/csv.hpp>
#include <chemolv/app/scenario.hpp>
#include <chemolv/diagnostics.hpp>
#include <chemolv/hypotheses.hpp>
#include <chemolv/ode_bounds.hpp>
#include <chemolv/pde_stepper.hpp>
#include <chemolv/steady_states.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>

namespace chemolv::app {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitPrecondition = 3,
    kExitNumericalGuard = 4,
};

struct CommandResult {
    json document;
    int exit_code = kExitOk;
};

/// A number together with where it came from: "formula:<name>" or "measured".
[[nodiscard]] inline json labeled(double value, const std::string& source) {
    return json{{"value", value}, {"source", source}};
}

[[nodiscard]] inline json state_json(const ConstantState& s, const std::string& source) {
    return json{{"u", labeled(s.u, source)}, {"v", labeled(s.v, source)}, {"w", labeled(s.w, source)}};
}

[[nodiscard]] inline json report_json(const HypothesisReport& r) {
    json margins = json::array();
    const std::string source = "formula:hypothesis." + r.name;
    for (const auto& m : r.margins) {
        margins.push_back({{"label", m.label},
                           {"slack", labeled(m.slack, source)},
                           {"strict", m.strict},
                           {"satisfied", m.satisfied()}});
    }
    return json{{"name", r.name}, {"holds", r.holds}, {"margins", margins}, {"notes", r.notes}};
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
}

template <class Fn>
json try_formula(Fn&& fn) {
    try {
        return fn();
    } catch (const PreconditionError& e) {
        return json{{"available", false}, {"reason", e.what()}};
    }
}

struct InitialExtrema {
    double u_max = 0.0, u_min = 0.0, v_max = 0.0, v_min = 0.0, mass_u = 0.0, mass_v = 0.0;
};

inline std::optional<InitialExtrema> initial_extrema(const ScenarioConfig& cfg) {
    if (!cfg.initial_data) return std::nullopt;
    const Grid1D grid = cfg.grid();
    const auto [u, v] = make_initial_fields(*cfg.initial_data, grid);
    const auto su = summarize(u), sv = summarize(v);
    return InitialExtrema{su.max, su.min, sv.max, sv.min, integrate(u, grid), integrate(v, grid)};
}

}  // namespace detail

// -----------------------------------------------------------------------------
// check
// -----------------------------------------------------------------------------

[[nodiscard]] inline CommandResult cmd_check(const ScenarioConfig& cfg, int n_dim = 1) {
    const auto suite = check_all(cfg.params, n_dim);
    json reports = json::array();
    for (const auto& r : suite.reports) reports.push_back(report_json(r));

    json extras = json::object();
    const auto src_f = std::string("formula:f_function");
    extras["f_at_half_n"] = labeled(eval_f(cfg.params, 0.5 * n_dim), src_f);
    extras["g_at_half_n"] = labeled(eval_g(cfg.params, 0.5 * n_dim), "formula:g_function");
    extras["gamma_star"] = detail::try_formula([&] { return labeled(gamma_star(cfg.params), "formula:gamma_star"); });

    CommandResult res;
    res.document = json{{"command", "check"},
                        {"n_dim", labeled(n_dim, "config")},
                        {"reports", reports},
                        {"functions", extras},
                        {"classification",
                         {{"global_existence", suite.regime.global_existence},
                          {"asymptotics", to_string(suite.regime.asymptotics)}}}};
    return res;
}

// -----------------------------------------------------------------------------
// steady / bounds
// -----------------------------------------------------------------------------

[[nodiscard]] inline CommandResult cmd_steady(const ScenarioConfig& cfg) {
    const auto& p = cfg.params;
    json doc{{"command", "steady"}};
    doc["coexistence"] = detail::try_formula([&] {
        const auto s = coexistence_state(p);
        return json{{"available", true}, {"state", state_json(s, "formula:coexistence_state")}};
    });
    doc["exclusion"] = detail::try_formula([&] {
        return json{{"available", true}, {"state", state_json(exclusion_state(p), "formula:exclusion_state")}};
    });
    doc["semi_trivial"] = detail::try_formula([&] {
        const auto [su, sv] = semi_trivial_states(p);
        return json{{"available", true},
                    {"u_only", state_json(su, "formula:semi_trivial_u")},
                    {"v_only", state_json(sv, "formula:semi_trivial_v")}};
    });
    return {doc, kExitOk};
}

[[nodiscard]] inline CommandResult cmd_bounds(const ScenarioConfig& cfg) {
    const auto& p = cfg.params;
    const auto ext = detail::initial_extrema(cfg).value_or(detail::InitialExtrema{});
    json doc{{"command", "bounds"}};
    doc["initial_data"] = {{"sup_u0", labeled(ext.u_max, "measured")},
                           {"sup_v0", labeled(ext.v_max, "measured")},
                           {"mass_u0", labeled(ext.mass_u, "measured")},
                           {"mass_v0", labeled(ext.mass_v, "measured")},
                           {"from_config", cfg.initial_data.has_value()}};
    doc["linf"] = detail::try_formula([&] {
        const auto b = linf_bounds(p, ext.u_max, ext.v_max);
        const std::string s = "formula:linf_bounds";
        return json{{"available", true},       {"m00", labeled(b.m00, s)},     {"m01", labeled(b.m01, s)},
                    {"m02", labeled(b.m02, s)}, {"l_const", labeled(b.l_const, s)}, {"cap_u", labeled(b.cap_u, s)},
                    {"cap_v", labeled(b.cap_v, s)}};
    });
    doc["l1"] = detail::try_formula([&] {
        const auto b = l1_bounds(p, ext.mass_u, ext.mass_v);
        const std::string s = "formula:l1_bounds";
        return json{{"available", true},
                    {"m_l1", labeled(b.m_l1, s)},
                    {"mass_u_cap", labeled(b.mass_u_cap, s)},
                    {"mass_v_cap", labeled(b.mass_v_cap, s)}};
    });
    const auto [alpha, beta] = alpha_beta(p);
    doc["mass_sum"] = detail::try_formula([&, alpha = alpha, beta = beta] {
        const std::string s = "formula:mass_sum_cap";
        return json{{"available", true},
                    {"alpha", labeled(alpha, s)},
                    {"beta", labeled(beta, s)},
                    {"cap", labeled(mass_sum_cap(p, ext.mass_u + ext.mass_v), s)}};
    });
    if (!doc["mass_sum"].value("available", false)) {
        doc["mass_sum"]["alpha"] = labeled(alpha, "formula:mass_sum_cap");
        doc["mass_sum"]["beta"] = labeled(beta, "formula:mass_sum_cap");
    }
    return {doc, kExitOk};
}

// -----------------------------------------------------------------------------
// simulate
// -----------------------------------------------------------------------------

namespace detail {

inline void require_dynamics(const ScenarioConfig& cfg) {
    if (!cfg.stepper) throw ConfigError("scenario.stepper: required for this command");
    if (!cfg.initial_data) throw ConfigError("scenario.initial_data: required for this command");
}

inline SimulationResult simulate(const ScenarioConfig& cfg) {
    require_dynamics(cfg);
    const Grid1D grid = cfg.grid();
    auto refs = resolve_references(cfg.references, cfg.params);
    auto [u, v] = make_initial_fields(*cfg.initial_data, grid);
    FieldState s0;
    s0.u = std::move(u);
    s0.v = std::move(v);
    return run_simulation(s0, cfg.params, grid, *cfg.stepper, std::move(refs));
}

}  // namespace detail

[[nodiscard]] inline json simulation_summary(const ScenarioConfig& cfg, const TrajectoryRecord& rec) {
    const auto& p = cfg.params;
    json doc{{"command", "simulate"}};
    doc["termination"] = to_string(rec.termination);
    doc["samples"] = labeled(static_cast<double>(rec.samples.size()), "measured");

    const auto& first = rec.samples.front();
    const auto& last = rec.samples.back();
    json final_state{{"t", labeled(last.t, "measured")}};
    json dists = json::object();
    for (std::size_t i = 0; i < rec.references.size(); ++i) {
        const auto& d = last.distances[i];
        dists[rec.references[i].name] = {{"reference", state_json(rec.references[i].state, "formula:reference_state")},
                                         {"dist_u", labeled(d.du, "measured")},
                                         {"dist_v", labeled(d.dv, "measured")},
                                         {"dist_w", labeled(d.dw, "measured")}};
    }
    final_state["distances"] = dists;
    doc["final"] = final_state;

    const double window = cfg.diagnostics.tail_fraction * rec.span();
    if (rec.span() > 0.0) {
        const auto ts = tail_stats(rec, window);
        doc["tail_stats"] = {{"window", labeled(ts.window, "measured")}, {"u_hi", labeled(ts.u_hi, "measured")},
                             {"u_lo", labeled(ts.u_lo, "measured")},     {"v_hi", labeled(ts.v_hi, "measured")},
                             {"v_lo", labeled(ts.v_lo, "measured")}};
        const auto cert = detect_steady(rec, cfg.diagnostics.steady_tol, window);
        doc["steady"] = {{"steady", cert.steady},
                         {"tol", labeled(cert.tol, "config")},
                         {"window", labeled(cert.window, "measured")},
                         {"spatial_spread", labeled(cert.spatial_spread, "measured")},
                         {"temporal_drift", labeled(cert.temporal_drift, "measured")}};
    } else {
        doc["tail_stats"] = {{"available", false}, {"reason", "record has zero time span"}};
        doc["steady"] = {{"available", false}, {"reason", "record has zero time span"}};
    }

    const double rel = cfg.diagnostics.envelope_rel_tol;
    json env = json::object();
    env["linf"] = detail::try_formula([&] {
        const auto b = linf_bounds(p, first.u.max, first.v.max);
        const auto viol = count_linf_violations(rec, b.cap_u, b.cap_v, rel);
        return json{{"available", true},
                    {"cap_u", labeled(b.cap_u, "formula:linf_bounds")},
                    {"cap_v", labeled(b.cap_v, "formula:linf_bounds")},
                    {"violations_u", labeled(static_cast<double>(viol.u), "measured")},
                    {"violations_v", labeled(static_cast<double>(viol.v), "measured")},
                    {"worst_ratio", labeled(viol.worst_ratio, "measured")}};
    });
    env["mass_sum"] = detail::try_formula([&] {
        const double cap = mass_sum_cap(p, first.mass_u + first.mass_v);
        double worst = 0.0;
        const auto n = count_mass_violations(rec, cap, rel, &worst);
        return json{{"available", true},
                    {"cap", labeled(cap, "formula:mass_sum_cap")},
                    {"violations", labeled(static_cast<double>(n), "measured")},
                    {"worst_ratio", labeled(worst, "measured")}};
    });
    env["rel_tol"] = labeled(rel, "config");
    doc["envelopes"] = env;
    doc["clipped_mass"] = labeled(rec.clipped_mass, "measured");
    return doc;
}

[[nodiscard]] inline CommandResult cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir) {
    TrajectoryRecord rec;
    std::string abort_reason;
    try {
        rec = detail::simulate(cfg).record;
    } catch (const SimulationAborted& e) {
        rec = e.record();
        abort_reason = e.what();
    }

    std::ostringstream csv;
    write_trajectory_csv(csv, rec);
    detail::write_text(out_dir / cfg.outputs.trajectory_csv, csv.str());

    CommandResult res;
    res.document = simulation_summary(cfg, rec);
    if (!abort_reason.empty()) res.document["abort_reason"] = abort_reason;
    detail::write_text(out_dir / cfg.outputs.summary, res.document.dump(2) + "\n");
    const bool tripped = rec.termination == Termination::blow_up || rec.termination == Termination::step_rejected;
    res.exit_code = tripped ? kExitNumericalGuard : kExitOk;
    return res;
}

// -----------------------------------------------------------------------------
// rectangles
// -----------------------------------------------------------------------------

/// Integrates the rectangle system alongside a PDE trace (simulated from the
/// scenario, or read from trajectory_csv) and checks the enclosure.
[[nodiscard]] inline CommandResult cmd_rectangles(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                                                  const std::optional<std::filesystem::path>& trajectory_csv = {}) {
    TrajectoryRecord rec;
    if (trajectory_csv) {
        std::ifstream in(*trajectory_csv);
        if (!in) throw ConfigError("cannot open trajectory csv '" + trajectory_csv->string() + "'");
        rec = read_trajectory_csv(in);
        if (rec.samples.empty()) throw ConfigError("trajectory csv: no samples");
    } else {
        rec = detail::simulate(cfg).record;
    }

    const auto& first = rec.samples.front();
    RectangleState s0 = cfg.rectangles.initial.value_or(
        RectangleState{first.t, first.u.max, first.u.min, first.v.max, first.v.min});
    s0.t = first.t;
    const auto trace =
        integrate_rectangles(s0, cfg.params, cfg.rectangles.dt, rec.samples.back().t, cfg.rectangles.record_every);

    std::ostringstream csv;
    write_rectangles_csv(csv, trace.states);
    detail::write_text(out_dir / cfg.outputs.rectangles_csv, csv.str());

    CommandResult res;
    json doc{{"command", "rectangles"}, {"rectangle_diverged", trace.diverged}};
    doc["initial"] = {{"u_hi", labeled(s0.u_hi, "measured")},
                      {"u_lo", labeled(s0.u_lo, "measured")},
                      {"v_hi", labeled(s0.v_hi, "measured")},
                      {"v_lo", labeled(s0.v_lo, "measured")},
                      {"overridden", cfg.rectangles.initial.has_value()}};
    if (trace.diverged) {
        doc["enclosure"] = {{"available", false}, {"reason", "rectangle system exceeded the divergence guard"}};
        res.exit_code = kExitNumericalGuard;
    } else {
        const auto rep = check_enclosure(rec, trace.states, cfg.rectangles.tol);
        doc["enclosure"] = {{"pass", rep.pass},
                            {"tol", labeled(rep.tol, "config")},
                            {"worst_violation", labeled(rep.worst_violation, "measured")},
                            {"worst_time", labeled(rep.worst_time, "measured")},
                            {"violating_samples", labeled(static_cast<double>(rep.violating_samples), "measured")}};
        if (rec.termination == Termination::blow_up) res.exit_code = kExitNumericalGuard;
    }
    res.document = doc;
    detail::write_text(out_dir / cfg.outputs.enclosure_report, doc.dump(2) + "\n");
    return res;
}

}  // namespace chemolv::app
