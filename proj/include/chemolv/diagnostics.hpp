#pragma once

// Trajectory records, sup-distances to reference states, trailing-window
// tail statistics and steady-state detection.
// The long-time limsup/liminf of spatial extrema are approximated by extrema
// over a trailing time window; the window width travels with every result.

#include <chemolv/model.hpp>
#include <chemolv/steady_states.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace chemolv {

struct FieldSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

[[nodiscard]] inline FieldSummary summarize(const Field& f) {
    FieldSummary s;
    if (f.empty()) return s;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    s.min = *lo;
    s.max = *hi;
    double sum = 0.0;
    for (double x : f) sum += x;
    s.mean = sum / static_cast<double>(f.size());
    return s;
}

struct SupDistance {
    double du = 0.0;
    double dv = 0.0;
    double dw = 0.0;

    [[nodiscard]] double max() const noexcept { return std::max({du, dv, dw}); }
};

[[nodiscard]] inline SupDistance sup_distance(const FieldState& s, const ConstantState& ref) {
    const auto dist = [](const Field& f, double c) {
        double d = 0.0;
        for (double x : f) d = std::max(d, std::abs(x - c));
        return d;
    };
    return {dist(s.u, ref.u), dist(s.v, ref.v), dist(s.w, ref.w)};
}

struct NamedReference {
    std::string name;
    ConstantState state;
};

struct TrajectorySample {
    double t = 0.0;
    FieldSummary u, v, w;
    double mass_u = 0.0;
    double mass_v = 0.0;
    std::vector<SupDistance> distances;  ///< one per reference, same order
};

enum class Termination { reached_t_end, steady_state, blow_up, step_rejected };

[[nodiscard]] inline const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::reached_t_end: return "reached_t_end";
        case Termination::steady_state: return "steady_state";
        case Termination::blow_up: return "blow_up";
        case Termination::step_rejected: return "step_rejected";
    }
    return "reached_t_end";
}

struct TrajectoryRecord {
    std::vector<NamedReference> references;
    std::vector<TrajectorySample> samples;
    Termination termination = Termination::reached_t_end;
    double clipped_mass = 0.0;  ///< mass removed by positivity clipping, if enabled

    [[nodiscard]] double span() const noexcept {
        return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
    }
};

[[nodiscard]] inline TrajectorySample make_sample(const FieldState& s, const Grid1D& grid,
                                                  const std::vector<NamedReference>& refs) {
    TrajectorySample out;
    out.t = s.t;
    out.u = summarize(s.u);
    out.v = summarize(s.v);
    out.w = summarize(s.w);
    out.mass_u = integrate(s.u, grid);
    out.mass_v = integrate(s.v, grid);
    out.distances.reserve(refs.size());
    for (const auto& r : refs) out.distances.push_back(sup_distance(s, r.state));
    return out;
}

// -----------------------------------------------------------------------------
// Tail statistics
// -----------------------------------------------------------------------------

struct TailStats {
    double window = 0.0;
    double u_hi = 0.0;
    double u_lo = 0.0;
    double v_hi = 0.0;
    double v_lo = 0.0;
};

namespace detail {

inline std::size_t tail_begin(const TrajectoryRecord& rec, double window, const char* who) {
    if (rec.samples.empty() || rec.span() < window) {
        throw PreconditionError(std::string(who) + ": record spans less than the requested window");
    }
    const double t0 = rec.samples.back().t - window;
    std::size_t i = rec.samples.size() - 1;
    while (i > 0 && rec.samples[i - 1].t >= t0) --i;
    return i;
}

}  // namespace detail

[[nodiscard]] inline TailStats tail_stats(const TrajectoryRecord& rec, double window) {
    const std::size_t first = detail::tail_begin(rec, window, "tail_stats");
    TailStats ts;
    ts.window = window;
    ts.u_hi = ts.v_hi = -std::numeric_limits<double>::infinity();
    ts.u_lo = ts.v_lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < rec.samples.size(); ++i) {
        const auto& s = rec.samples[i];
        ts.u_hi = std::max(ts.u_hi, s.u.max);
        ts.u_lo = std::min(ts.u_lo, s.u.min);
        ts.v_hi = std::max(ts.v_hi, s.v.max);
        ts.v_lo = std::min(ts.v_lo, s.v.min);
    }
    return ts;
}

// -----------------------------------------------------------------------------
// Steady-state detection
// -----------------------------------------------------------------------------

struct SteadyCertificate {
    bool steady = false;
    double tol = 0.0;
    double window = 0.0;
    double spatial_spread = 0.0;  ///< max over window and fields of (max - min) in space
    double temporal_drift = 0.0;  ///< max over fields of the temporal range of min, max and mean
};

/// A trace is steady over the trailing window when each field is flat in
/// space and its spatial min, max and mean each vary by less than tol in time.
[[nodiscard]] inline SteadyCertificate detect_steady(const TrajectoryRecord& rec, double tol, double window) {
    const std::size_t first = detail::tail_begin(rec, window, "detect_steady");
    SteadyCertificate c;
    c.tol = tol;
    c.window = window;

    struct Range {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        void add(double x) { lo = std::min(lo, x), hi = std::max(hi, x); }
        [[nodiscard]] double width() const { return hi - lo; }
    };
    Range ranges[9];
    for (std::size_t i = first; i < rec.samples.size(); ++i) {
        const auto& s = rec.samples[i];
        const FieldSummary* fields[] = {&s.u, &s.v, &s.w};
        for (int f = 0; f < 3; ++f) {
            c.spatial_spread = std::max(c.spatial_spread, fields[f]->max - fields[f]->min);
            ranges[3 * f + 0].add(fields[f]->min);
            ranges[3 * f + 1].add(fields[f]->max);
            ranges[3 * f + 2].add(fields[f]->mean);
        }
    }
    for (const auto& r : ranges) c.temporal_drift = std::max(c.temporal_drift, r.width());
    c.steady = c.spatial_spread < tol && c.temporal_drift < tol;
    return c;
}

// -----------------------------------------------------------------------------
// Envelope counters
// -----------------------------------------------------------------------------

/// Number of samples whose max u (resp. max v) exceeds cap * (1 + rel_tol).
struct EnvelopeViolations {
    std::size_t u = 0;
    std::size_t v = 0;
    double worst_ratio = 0.0;  ///< max over samples of field max / cap
};

[[nodiscard]] inline EnvelopeViolations count_linf_violations(const TrajectoryRecord& rec, double cap_u,
                                                              double cap_v, double rel_tol) {
    EnvelopeViolations out;
    for (const auto& s : rec.samples) {
        if (s.u.max > cap_u * (1.0 + rel_tol)) ++out.u;
        if (s.v.max > cap_v * (1.0 + rel_tol)) ++out.v;
        out.worst_ratio = std::max({out.worst_ratio, s.u.max / cap_u, s.v.max / cap_v});
    }
    return out;
}

/// Number of samples whose total mass exceeds cap * (1 + rel_tol).
[[nodiscard]] inline std::size_t count_mass_violations(const TrajectoryRecord& rec, double cap, double rel_tol,
                                                       double* worst_ratio = nullptr) {
    std::size_t n = 0;
    double worst = 0.0;
    for (const auto& s : rec.samples) {
        const double m = s.mass_u + s.mass_v;
        if (m > cap * (1.0 + rel_tol)) ++n;
        worst = std::max(worst, m / cap);
    }
    if (worst_ratio) *worst_ratio = worst;
    return n;
}

}  // namespace chemolv
