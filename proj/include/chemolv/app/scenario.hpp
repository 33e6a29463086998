#pragma once

// Scenario files: a single JSON document with a fixed key set.
// Unknown keys anywhere are errors, as are missing required keys. Example:
// {
// "params": { "d1": 1, "d2": 1, "d3": 1, "chi1": 0.1, "chi2": 0.1,
// "a0": 1, "b0": 1, "a1": 2, "b2": 2, "a2": 1, "b1": 1,
// "a3": 0, "a4": 0, "b3": 0, "b4": 0,
// "k": 1, "l": 1, "lambda": 1, "omega_measure": 1 },
// "grid": { "length": 1, "n_cells": 128 },
// "stepper": { "dt": 0.01, "t_end": 200, "record_every": 10 },
// "initial_data": { "perturbed_constant": { "u0": 0.5, "v0": 0.5, "amplitude": 0.1, "mode_count": 2 } },
// "references": [ "coexistence" ]
// }

#include <chemolv/model.hpp>
#include <chemolv/ode_bounds.hpp>
#include <chemolv/pde_stepper.hpp>
#include <chemolv/steady_states.hpp>

#include "json.hpp"

#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace chemolv::app {

using nlohmann::json;

struct ConstantInit {
    double u0 = 0.0, v0 = 0.0;
};

/// u = u0 + A cos(m pi x / L),  v = v0 - A cos(m pi x / L)
struct PerturbedConstantInit {
    double u0 = 0.0, v0 = 0.0, amplitude = 0.0;
    int mode_count = 1;
};

/// One Gaussian bump per species: index 0 for u, index 1 for v.
struct TwoBumpsInit {
    double centers[2] = {0.0, 0.0};
    double widths[2] = {1.0, 1.0};
    double heights[2] = {0.0, 0.0};
};

using InitialData = std::variant<ConstantInit, PerturbedConstantInit, TwoBumpsInit>;

/// A reference state request; kind is coexistence, exclusion, semi_trivial or custom.
struct ReferenceSpec {
    std::string kind;
    std::string name;
    ConstantState custom;
};

struct DiagnosticsConfig {
    double tail_fraction = 0.2;
    double steady_tol = 1e-4;
    double envelope_rel_tol = 1e-6;
};

struct RectanglesConfig {
    double dt = 1e-3;
    double tol = 1e-3;
    std::size_t record_every = 100;
    std::optional<RectangleState> initial;  ///< defaults to the initial-data extrema
};

struct OutputsConfig {
    std::string trajectory_csv = "trajectory.csv";
    std::string summary = "summary.json";
    std::string rectangles_csv = "rectangles.csv";
    std::string enclosure_report = "enclosure.json";
};

struct ScenarioConfig {
    ModelParams params;
    double grid_length = 1.0;
    std::size_t n_cells = 0;
    std::optional<StepperConfig> stepper;
    std::optional<InitialData> initial_data;
    std::vector<ReferenceSpec> references;
    DiagnosticsConfig diagnostics;
    RectanglesConfig rectangles;
    OutputsConfig outputs;

    [[nodiscard]] Grid1D grid() const { return Grid1D(grid_length, n_cells); }
};

namespace detail {

inline void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

inline void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(path + "." + key + ": unknown key");
    }
}

inline double get_number(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing required key");
    const auto& x = j.at(key);
    if (!x.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return x.get<double>();
}

inline double get_number_or(const json& j, const std::string& key, const std::string& path, double fallback) {
    return j.contains(key) ? get_number(j, key, path) : fallback;
}

inline std::size_t get_count(const json& j, const std::string& key, const std::string& path) {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing required key");
    const auto& x = j.at(key);
    if (!x.is_number_integer() || x.get<long long>() < 0) {
        throw ConfigError(path + "." + key + ": expected a nonnegative integer");
    }
    return x.get<std::size_t>();
}

inline bool get_bool_or(const json& j, const std::string& key, const std::string& path, bool fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_boolean()) throw ConfigError(path + "." + key + ": expected true or false");
    return j.at(key).get<bool>();
}

inline std::string get_string_or(const json& j, const std::string& key, const std::string& path,
                                 const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

inline ModelParams parse_params(const json& j) {
    require_object(j, "params");
    std::set<std::string> allowed;
    for (const auto& f : kParamFields) allowed.insert(f.name);
    reject_unknown(j, "params", allowed);
    ModelParams p;
    for (const auto& f : kParamFields) p.*(f.member) = get_number(j, f.name, "params");
    return p;
}

inline StepperConfig parse_stepper(const json& j) {
    const std::string path = "stepper";
    require_object(j, path);
    reject_unknown(j, path,
                   {"dt", "t_end", "cfl_safety", "positivity_clip", "record_every", "blowup_guard", "steady_tol",
                    "steady_window"});
    StepperConfig c;
    c.dt = get_number(j, "dt", path);
    c.t_end = get_number(j, "t_end", path);
    c.cfl_safety = get_number_or(j, "cfl_safety", path, c.cfl_safety);
    c.positivity_clip = get_bool_or(j, "positivity_clip", path, c.positivity_clip);
    c.record_every = j.contains("record_every") ? get_count(j, "record_every", path) : c.record_every;
    c.blowup_guard = get_number_or(j, "blowup_guard", path, c.blowup_guard);
    c.steady_tol = get_number_or(j, "steady_tol", path, c.steady_tol);
    c.steady_window = get_number_or(j, "steady_window", path, c.steady_window);
    if (!(c.dt > 0.0)) throw ConfigError("stepper.dt: must be positive");
    if (c.t_end < 0.0) throw ConfigError("stepper.t_end: must be nonnegative");
    if (!(c.cfl_safety > 0.0 && c.cfl_safety <= 1.0)) throw ConfigError("stepper.cfl_safety: must lie in (0, 1]");
    if (c.record_every == 0) throw ConfigError("stepper.record_every: must be >= 1");
    return c;
}

inline void get_pair(const json& j, const std::string& key, const std::string& path, double out[2]) {
    if (!j.contains(key)) throw ConfigError(path + "." + key + ": missing required key");
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
        throw ConfigError(path + "." + key + ": expected an array of two numbers");
    }
    out[0] = a[0].get<double>();
    out[1] = a[1].get<double>();
}

inline InitialData parse_initial(const json& j) {
    require_object(j, "initial_data");
    if (j.size() != 1) throw ConfigError("initial_data: expected exactly one of constant, perturbed_constant, two_bumps");
    const auto& [kind, body] = *j.items().begin();
    const std::string path = "initial_data." + kind;
    require_object(body, path);
    if (kind == "constant") {
        reject_unknown(body, path, {"u0", "v0"});
        return ConstantInit{get_number(body, "u0", path), get_number(body, "v0", path)};
    }
    if (kind == "perturbed_constant") {
        reject_unknown(body, path, {"u0", "v0", "amplitude", "mode_count"});
        PerturbedConstantInit p;
        p.u0 = get_number(body, "u0", path);
        p.v0 = get_number(body, "v0", path);
        p.amplitude = get_number(body, "amplitude", path);
        p.mode_count = static_cast<int>(get_count(body, "mode_count", path));
        return p;
    }
    if (kind == "two_bumps") {
        reject_unknown(body, path, {"centers", "widths", "heights"});
        TwoBumpsInit b;
        get_pair(body, "centers", path, b.centers);
        get_pair(body, "widths", path, b.widths);
        get_pair(body, "heights", path, b.heights);
        return b;
    }
    throw ConfigError("initial_data." + kind + ": unknown initial data kind");
}

inline std::vector<ReferenceSpec> parse_references(const json& j) {
    if (!j.is_array()) throw ConfigError("references: expected an array");
    std::vector<ReferenceSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "references[" + std::to_string(i) + "]";
        const auto& r = j[i];
        if (r.is_string()) {
            const auto kind = r.get<std::string>();
            if (kind != "coexistence" && kind != "exclusion" && kind != "semi_trivial") {
                throw ConfigError(path + ": unknown reference '" + kind + "'");
            }
            out.push_back({kind, kind, {}});
        } else if (r.is_object() && r.size() == 1 && r.contains("custom")) {
            const auto& c = r.at("custom");
            const std::string cp = path + ".custom";
            require_object(c, cp);
            reject_unknown(c, cp, {"name", "u", "v", "w"});
            ReferenceSpec s{"custom", get_string_or(c, "name", cp, "custom" + std::to_string(i)), {}};
            s.custom = {get_number(c, "u", cp), get_number(c, "v", cp), get_number(c, "w", cp)};
            out.push_back(s);
        } else {
            throw ConfigError(path + ": expected a reference name or {\"custom\": {...}}");
        }
    }
    return out;
}

inline DiagnosticsConfig parse_diagnostics(const json& j) {
    const std::string path = "diagnostics";
    require_object(j, path);
    reject_unknown(j, path, {"tail_fraction", "steady_tol", "envelope_rel_tol"});
    DiagnosticsConfig d;
    d.tail_fraction = get_number_or(j, "tail_fraction", path, d.tail_fraction);
    d.steady_tol = get_number_or(j, "steady_tol", path, d.steady_tol);
    d.envelope_rel_tol = get_number_or(j, "envelope_rel_tol", path, d.envelope_rel_tol);
    if (!(d.tail_fraction > 0.0 && d.tail_fraction <= 1.0)) {
        throw ConfigError("diagnostics.tail_fraction: must lie in (0, 1]");
    }
    return d;
}

inline RectanglesConfig parse_rectangles(const json& j) {
    const std::string path = "rectangles";
    require_object(j, path);
    reject_unknown(j, path, {"dt", "tol", "record_every", "initial"});
    RectanglesConfig r;
    r.dt = get_number_or(j, "dt", path, r.dt);
    r.tol = get_number_or(j, "tol", path, r.tol);
    if (j.contains("record_every")) r.record_every = get_count(j, "record_every", path);
    if (j.contains("initial")) {
        const auto& i = j.at("initial");
        const std::string ip = path + ".initial";
        require_object(i, ip);
        reject_unknown(i, ip, {"u_hi", "u_lo", "v_hi", "v_lo"});
        r.initial = RectangleState{0.0, get_number(i, "u_hi", ip), get_number(i, "u_lo", ip),
                                   get_number(i, "v_hi", ip), get_number(i, "v_lo", ip)};
    }
    if (!(r.dt > 0.0)) throw ConfigError("rectangles.dt: must be positive");
    if (r.record_every == 0) throw ConfigError("rectangles.record_every: must be >= 1");
    return r;
}

inline OutputsConfig parse_outputs(const json& j) {
    const std::string path = "outputs";
    require_object(j, path);
    reject_unknown(j, path, {"trajectory_csv", "summary", "rectangles_csv", "enclosure_report"});
    OutputsConfig o;
    o.trajectory_csv = get_string_or(j, "trajectory_csv", path, o.trajectory_csv);
    o.summary = get_string_or(j, "summary", path, o.summary);
    o.rectangles_csv = get_string_or(j, "rectangles_csv", path, o.rectangles_csv);
    o.enclosure_report = get_string_or(j, "enclosure_report", path, o.enclosure_report);
    return o;
}

inline std::string parse_error_location(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

[[nodiscard]] inline ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario parse error at " + detail::parse_error_location(text, e.byte) + ": " + e.what());
    }
    detail::require_object(j, "scenario");
    detail::reject_unknown(j, "scenario",
                           {"params", "grid", "stepper", "initial_data", "references", "diagnostics", "rectangles",
                            "outputs"});
    ScenarioConfig c;
    if (!j.contains("params")) throw ConfigError("scenario.params: missing required key");
    c.params = detail::parse_params(j.at("params"));
    const auto violations = validate_params(c.params);
    if (!violations.empty()) {
        std::string msg = "params:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw ConfigError(msg);
    }
    if (!j.contains("grid")) throw ConfigError("scenario.grid: missing required key");
    const auto& g = j.at("grid");
    detail::require_object(g, "grid");
    detail::reject_unknown(g, "grid", {"length", "n_cells"});
    c.grid_length = detail::get_number(g, "length", "grid");
    c.n_cells = detail::get_count(g, "n_cells", "grid");
    (void)c.grid();  // validates
    if (std::abs(c.params.omega_measure - c.grid_length) > 1e-12 * c.grid_length) {
        throw ConfigError("params.omega_measure: must equal grid.length");
    }
    if (j.contains("stepper")) c.stepper = detail::parse_stepper(j.at("stepper"));
    if (j.contains("initial_data")) c.initial_data = detail::parse_initial(j.at("initial_data"));
    if (j.contains("references")) c.references = detail::parse_references(j.at("references"));
    if (j.contains("diagnostics")) c.diagnostics = detail::parse_diagnostics(j.at("diagnostics"));
    if (j.contains("rectangles")) c.rectangles = detail::parse_rectangles(j.at("rectangles"));
    if (j.contains("outputs")) c.outputs = detail::parse_outputs(j.at("outputs"));
    return c;
}

[[nodiscard]] inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

/// Initial (u, v) for the configured initial data.
[[nodiscard]] inline std::pair<Field, Field> make_initial_fields(const InitialData& init, const Grid1D& grid) {
    if (const auto* c = std::get_if<ConstantInit>(&init)) {
        return {constant_field(grid, c->u0), constant_field(grid, c->v0)};
    }
    if (const auto* p = std::get_if<PerturbedConstantInit>(&init)) {
        return {cosine_field(grid, p->u0, p->amplitude, p->mode_count, 1.0),
                cosine_field(grid, p->v0, p->amplitude, p->mode_count, -1.0)};
    }
    const auto& b = std::get<TwoBumpsInit>(init);
    return {bump_field(grid, b.centers[0], b.widths[0], b.heights[0]),
            bump_field(grid, b.centers[1], b.widths[1], b.heights[1])};
}

/// Resolves reference requests into named constant states; throws
/// PreconditionError when one is not computable for the parameters.
[[nodiscard]] inline std::vector<NamedReference> resolve_references(const std::vector<ReferenceSpec>& specs,
                                                                    const ModelParams& p) {
    std::vector<NamedReference> out;
    for (const auto& s : specs) {
        if (s.kind == "coexistence") {
            out.push_back({s.name, coexistence_state(p)});
        } else if (s.kind == "exclusion") {
            out.push_back({s.name, exclusion_state(p)});
        } else if (s.kind == "semi_trivial") {
            const auto [su, sv] = semi_trivial_states(p);
            out.push_back({"semi_trivial_u", su});
            out.push_back({"semi_trivial_v", sv});
        } else {
            out.push_back({s.name, s.custom});
        }
    }
    return out;
}

}  // namespace chemolv::app
