#pragma once

// Coefficients, grid and field types for the two-species chemotaxis
// system with nonlocal Lotka-Volterra kinetics.
// The system being modelled, on Omega = (0, length) with no-flux boundaries:
// u_t = d1 u_xx - chi1 (u w_x)_x + u (a0 - a1 u - a2 v - a3 |u|_1 - a4 |v|_1)
// v_t = d2 v_xx - chi2 (v w_x)_x + v (b0 - b1 u - b2 v - b3 |u|_1 - b4 |v|_1)
// 0   = d3 w_xx + k u + l v - lambda w
// where |f|_1 denotes the integral of f over Omega.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chemolv {

// =============================================================================
// Errors
// =============================================================================

/// A formula was evaluated outside the region where it is defined
/// (failed hypothesis, zero denominator, excluded argument).
class PreconditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical guard tripped: time step too large, or a trajectory diverged.
class NumericalGuardError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// =============================================================================
// Signed parts
// =============================================================================

[[nodiscard]] inline double positive_part(double a) noexcept { return a > 0.0 ? a : 0.0; }
[[nodiscard]] inline double negative_part(double a) noexcept { return a < 0.0 ? -a : 0.0; }

struct SignedParts {
    double pos = 0.0;
    double neg = 0.0;

    [[nodiscard]] static SignedParts of(double a) noexcept { return {positive_part(a), negative_part(a)}; }
    [[nodiscard]] double value() const noexcept { return pos - neg; }
};

// =============================================================================
// Model coefficients
// =============================================================================

struct ModelParams {
    double d1 = 1.0, d2 = 1.0, d3 = 1.0;
    double chi1 = 0.0, chi2 = 0.0;
    double a0 = 1.0, b0 = 1.0;
    double a1 = 1.0, b2 = 1.0;
    double a2 = 0.0, b1 = 0.0;
    double a3 = 0.0, a4 = 0.0;
    double b3 = 0.0, b4 = 0.0;
    double k = 1.0, l = 1.0;
    double lambda = 1.0;
    double omega_measure = 1.0;

    // Effective homogeneous coefficients: on spatially constant states the
    // nonlocal integrals collapse to |Omega| times the local density.
    [[nodiscard]] double a1_eff() const noexcept { return a1 + omega_measure * a3; }
    [[nodiscard]] double a2_eff() const noexcept { return a2 + omega_measure * a4; }
    [[nodiscard]] double b1_eff() const noexcept { return b1 + omega_measure * b3; }
    [[nodiscard]] double b2_eff() const noexcept { return b2 + omega_measure * b4; }
};

/// Field names of ModelParams, in declaration order. Shared by validation and
/// the scenario reader so the key set has a single source.
struct ParamField {
    const char* name;
    double ModelParams::*member;
    bool must_be_positive;
};

inline constexpr ParamField kParamFields[] = {
    {"d1", &ModelParams::d1, true},
    {"d2", &ModelParams::d2, true},
    {"d3", &ModelParams::d3, true},
    {"chi1", &ModelParams::chi1, true},
    {"chi2", &ModelParams::chi2, true},
    {"a0", &ModelParams::a0, true},
    {"b0", &ModelParams::b0, true},
    {"a1", &ModelParams::a1, true},
    {"b2", &ModelParams::b2, true},
    {"a2", &ModelParams::a2, false},
    {"b1", &ModelParams::b1, false},
    {"a3", &ModelParams::a3, false},
    {"a4", &ModelParams::a4, false},
    {"b3", &ModelParams::b3, false},
    {"b4", &ModelParams::b4, false},
    {"k", &ModelParams::k, true},
    {"l", &ModelParams::l, true},
    {"lambda", &ModelParams::lambda, true},
    {"omega_measure", &ModelParams::omega_measure, true},
};

/**
 * Lists every violated coefficient constraint, one entry per offending field,
 * in declaration order. An empty result means the parameters are admissible.
 *
 * Note: chi1 and chi2 are required positive to match the model class; tests
 * that need chemotaxis switched off construct ModelParams directly and skip
 * validation.
 */
[[nodiscard]] inline std::vector<std::string> validate_params(const ModelParams& p) {
    std::vector<std::string> out;
    for (const auto& f : kParamFields) {
        const double x = p.*(f.member);
        if (!std::isfinite(x)) {
            out.push_back(std::string(f.name) + " must be finite");
        } else if (f.must_be_positive && !(x > 0.0)) {
            out.push_back(std::string(f.name) + " must be strictly positive");
        }
    }
    return out;
}

// =============================================================================
// Grid and fields
// =============================================================================

/// Uniform cell-centred mesh on (0, length).
class Grid1D {
public:
    Grid1D(double length, std::size_t n_cells) : length_(length), n_cells_(n_cells) {
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw ConfigError("Grid1D: length must be positive and finite");
        }
        if (n_cells < 4) {
            throw ConfigError("Grid1D: n_cells must be >= 4");
        }
    }

    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] std::size_t n_cells() const noexcept { return n_cells_; }
    [[nodiscard]] double dx() const noexcept { return length_ / static_cast<double>(n_cells_); }
    [[nodiscard]] double center(std::size_t i) const noexcept {
        return (static_cast<double>(i) + 0.5) * dx();
    }

private:
    double length_;
    std::size_t n_cells_;
};

using Field = std::vector<double>;

struct FieldState {
    double t = 0.0;
    Field u;
    Field v;
    Field w;
};

/// Midpoint-rule integral dx * sum(f).
[[nodiscard]] inline double integrate(const Field& f, const Grid1D& grid) noexcept {
    double s = 0.0;
    for (double x : f) s += x;
    return grid.dx() * s;
}

}  // namespace chemolv
