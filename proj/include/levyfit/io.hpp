#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfit/errors.hpp"
#include "levyfit/estimator.hpp"
#include "levyfit/fpsolver.hpp"
#include "levyfit/grid.hpp"

namespace levyfit {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// Density CSV: header `x,p`, full 17-significant-digit reals.
inline void write_density_csv(const Density& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "x,p\n";
    for (std::size_t j = 0; j < d.grid.size(); ++j)
        out << detail::fmt17(d.grid.node(j)) << ',' << detail::fmt17(d.values[j]) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

/// Reads a density CSV back. The grid is reconstructed from the x column and
/// checked for uniform spacing.
inline Density read_density_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,p", 0) != 0)
        throw format_error("density csv: missing x,p header");
    std::vector<double> xs, ps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw format_error("density csv: malformed row");
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            ps.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw format_error("density csv: non-numeric row");
        }
    }
    if (xs.size() < 3) throw format_error("density csv: need at least 3 rows");
    const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    for (std::size_t j = 1; j < xs.size(); ++j)
        if (std::abs(xs[j] - xs[j - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw format_error("density csv: nodes are not uniformly spaced");
    return Density(Grid1D(xs.front(), xs.back(), xs.size()), std::move(ps));
}

inline ordered_json to_json(const ParamPoint& p) {
    return ordered_json{{"theta", p.theta}, {"alpha", p.alpha}, {"epsilon", p.epsilon}};
}

/// Sweep result JSON. Timings are deliberately left out: a fixed seed and
/// configuration must serialize to byte-identical files regardless of worker
/// count or machine load.
inline ordered_json to_json(const SweepResult& r) {
    ordered_json axes = ordered_json::array();
    for (const auto& axis : r.space.axes())
        axes.push_back(ordered_json{{"name", axis.name}, {"values", *axis.nodes}});

    ordered_json fixed = ordered_json::object();
    if (r.space.theta.is_fixed()) fixed["theta"] = r.space.theta.nodes().front();
    if (r.space.alpha.is_fixed()) fixed["alpha"] = r.space.alpha.nodes().front();
    if (r.space.epsilon.is_fixed()) fixed["epsilon"] = r.space.epsilon.nodes().front();

    ordered_json values = ordered_json::array();
    for (double v : r.values) {
        if (std::isnan(v))
            values.push_back(nullptr);
        else
            values.push_back(v);
    }

    ordered_json failures = ordered_json::array();
    for (const auto& f : r.failures)
        failures.push_back(ordered_json{{"index", f.index}, {"message", f.message}});

    return ordered_json{
        {"objective", objective_name(r.objective)},
        {"axes", axes},
        {"fixed", fixed},
        {"values", values},
        {"failures", failures},
        {"argmin", ordered_json{{"index", r.argmin_index},
                                {"point", to_json(r.argmin_point)},
                                {"value", r.argmin_value}}},
        {"argmax", ordered_json{{"index", r.argmax_index},
                                {"point", to_json(r.argmax_point)},
                                {"value", r.argmax_value}}},
        {"normalized_model", r.normalized_model},
    };
}

inline ordered_json to_json(const SublevelRegion& region, const SweepResult& r) {
    ordered_json points = ordered_json::array();
    for (const auto& p : region.points) points.push_back(to_json(p));
    ordered_json box = ordered_json::array();
    const auto axes = r.space.axes();
    for (std::size_t a = 0; a < region.box.size(); ++a)
        box.push_back(ordered_json{{"name", axes[a].name},
                                   {"lo", region.box[a].first},
                                   {"hi", region.box[a].second}});
    return ordered_json{{"threshold", region.threshold},
                        {"count", region.indices.size()},
                        {"indices", region.indices},
                        {"box", box},
                        {"points", points}};
}

/// CSV export `theta,alpha,epsilon,G`, one row per grid point (failed points
/// serialize G as nan) for heatmap/slice plotting.
inline void write_sweep_csv(const SweepResult& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << "theta,alpha,epsilon,G\n";
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const ParamPoint p = r.space.point_at(i);
        out << detail::fmt17(p.theta) << ',' << detail::fmt17(p.alpha) << ',' << detail::fmt17(p.epsilon)
            << ',' << detail::fmt17(r.values[i]) << '\n';
    }
    if (!out) throw io_error("write failed: " + path.string());
}

inline ordered_json to_json(const SolveDiagnostics& d) {
    return ordered_json{{"steps", d.steps},
                        {"dt", d.dt},
                        {"initial_mass", d.initial_mass},
                        {"final_mass", d.final_mass},
                        {"max_mass_increase", d.max_mass_increase},
                        {"min_value", d.min_value},
                        {"tail_sup_change", d.tail_sup_change},
                        {"mass_stride", d.mass_stride},
                        {"mass_history", d.mass_history}};
}

inline void write_json(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace levyfit
