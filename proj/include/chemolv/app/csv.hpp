#pragma once

// Deterministic CSV output (shortest round-trip decimal) and a reader for
// trajectory files.

#include <chemolv/diagnostics.hpp>
#include <chemolv/model.hpp>
#include <chemolv/ode_bounds.hpp>

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace chemolv::app {

[[nodiscard]] inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

[[nodiscard]] inline std::vector<std::string> trajectory_columns(const TrajectoryRecord& rec) {
    std::vector<std::string> cols = {"t",     "u_min", "u_max", "u_mean", "v_min", "v_max",
                                     "v_mean", "w_min", "w_max", "mass_u", "mass_v"};
    for (const auto& r : rec.references) {
        cols.push_back("dist_u_" + r.name);
        cols.push_back("dist_v_" + r.name);
        cols.push_back("dist_w_" + r.name);
    }
    return cols;
}

inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    const auto cols = trajectory_columns(rec);
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& s : rec.samples) {
        os << format_double(s.t);
        for (double x : {s.u.min, s.u.max, s.u.mean, s.v.min, s.v.max, s.v.mean, s.w.min, s.w.max, s.mass_u,
                         s.mass_v}) {
            os << ',' << format_double(x);
        }
        for (const auto& d : s.distances) {
            os << ',' << format_double(d.du) << ',' << format_double(d.dv) << ',' << format_double(d.dw);
        }
        os << '\n';
    }
}

inline void write_rectangles_csv(std::ostream& os, const std::vector<RectangleState>& states) {
    os << "t,u_hi,u_lo,v_hi,v_lo\n";
    for (const auto& s : states) {
        os << format_double(s.t) << ',' << format_double(s.u_hi) << ',' << format_double(s.u_lo) << ','
           << format_double(s.v_hi) << ',' << format_double(s.v_lo) << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError("trajectory csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return x;
}

}  // namespace detail

/// Reads the extrema columns of a trajectory CSV written by
/// write_trajectory_csv. Distances, means and masses other than the two
/// masses are ignored.
[[nodiscard]] inline TrajectoryRecord read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("trajectory csv: empty file");
    const auto header = detail::split(line);
    const auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ConfigError("trajectory csv: missing column '" + name + "'");
    };
    const std::size_t it = col("t"), iu0 = col("u_min"), iu1 = col("u_max"), iv0 = col("v_min"),
                      iv1 = col("v_max");

    TrajectoryRecord rec;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = detail::split(line);
        if (cells.size() != header.size()) {
            throw ConfigError("trajectory csv line " + std::to_string(lineno) + ": wrong column count");
        }
        TrajectorySample s;
        s.t = detail::parse_double(cells[it], lineno);
        s.u.min = detail::parse_double(cells[iu0], lineno);
        s.u.max = detail::parse_double(cells[iu1], lineno);
        s.v.min = detail::parse_double(cells[iv0], lineno);
        s.v.max = detail::parse_double(cells[iv1], lineno);
        rec.samples.push_back(s);
    }
    return rec;
}

}  // namespace chemolv::app
