#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyfit/distance.hpp"
#include "levyfit/drift.hpp"
#include "levyfit/errors.hpp"
#include "levyfit/fpsolver.hpp"
#include "levyfit/grid.hpp"
#include "levyfit/parallel.hpp"
#include "levyfit/params.hpp"

namespace levyfit {

/// One coordinate of the parameter space: either held FIXED at a known value
/// or swept over a uniform RANGE.
class CoordSpec {
public:
    static CoordSpec fixed(double value) {
        CoordSpec c;
        c.nodes_ = {value};
        c.fixed_ = true;
        return c;
    }
    /// Nodes lo, lo+step, ... up to hi (inclusive within rounding slack).
    static CoordSpec range(double lo, double hi, double step) {
        if (!(step > 0.0) || !(hi > lo)) throw config_error("range: require lo < hi and step > 0");
        CoordSpec c;
        c.fixed_ = false;
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        c.nodes_.reserve(count);
        for (std::size_t i = 0; i < count; ++i) c.nodes_.push_back(lo + step * static_cast<double>(i));
        if (c.nodes_.size() < 2) throw config_error("range: grids need at least 2 nodes");
        return c;
    }
    static CoordSpec range_count(double lo, double hi, std::size_t count) {
        if (count < 2) throw config_error("range: grids need at least 2 nodes");
        if (!(hi > lo)) throw config_error("range: require lo < hi");
        CoordSpec c;
        c.fixed_ = false;
        c.nodes_.reserve(count);
        c.nodes_.push_back(lo);
        for (std::size_t i = 1; i + 1 < count; ++i)
            c.nodes_.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        c.nodes_.push_back(hi);
        return c;
    }

    bool is_fixed() const noexcept { return fixed_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

private:
    std::vector<double> nodes_;
    bool fixed_ = true;
};

/// The swept parameter space. Coordinate order is (theta, alpha, epsilon);
/// flattened indices are row-major over the non-fixed axes in that order.
struct ParamSpace {
    CoordSpec theta = CoordSpec::fixed(1.0);
    CoordSpec alpha = CoordSpec::fixed(1.5);
    CoordSpec epsilon = CoordSpec::fixed(0.5);

    void validate() const {
        if (theta.is_fixed() && alpha.is_fixed() && epsilon.is_fixed())
            throw config_error("parameter space: at least one coordinate must be a range");
        for (double a : alpha.nodes())
            if (!(a > 0.0) || !(a < 2.0)) throw config_error("parameter space: alpha nodes must lie in (0, 2)");
        for (double e : epsilon.nodes())
            if (!(e > 0.0) || !(e <= 1.0)) throw config_error("parameter space: epsilon nodes must lie in (0, 1]");
    }

    std::size_t total_points() const { return theta.size() * alpha.size() * epsilon.size(); }

    ParamPoint point_at(std::size_t flat) const {
        const std::size_t ne = epsilon.size();
        const std::size_t na = alpha.size();
        const std::size_t ie = flat % ne;
        const std::size_t ia = (flat / ne) % na;
        const std::size_t it = flat / (ne * na);
        return ParamPoint{theta.nodes()[it], alpha.nodes()[ia], epsilon.nodes()[ie]};
    }

    struct Axis {
        std::string name;
        const std::vector<double>* nodes;
    };
    /// Non-fixed axes in sweep order.
    std::vector<Axis> axes() const {
        std::vector<Axis> out;
        if (!theta.is_fixed()) out.push_back({"theta", &theta.nodes()});
        if (!alpha.is_fixed()) out.push_back({"alpha", &alpha.nodes()});
        if (!epsilon.is_fixed()) out.push_back({"epsilon", &epsilon.nodes()});
        return out;
    }
};

struct SweepFailure {
    std::size_t index = 0;
    std::string message;
};

struct SweepOptions {
    unsigned workers = 1;
    /// Rescale each solver density to unit trapezoid mass before the distance
    /// is taken, so the objective compares shapes. The absorbing solve sheds
    /// mass through the boundary killing term at a rate that depends on
    /// lambda; without the rescale that leakage, not the fit, dominates the
    /// objective. The empirical density is left untouched.
    bool normalize_model = true;
};

struct SweepResult {
    ParamSpace space;
    ObjectiveKind objective = ObjectiveKind::hellinger;
    std::vector<double> values;  // flat, row-major; NaN where the solve failed
    std::vector<SweepFailure> failures;

    std::size_t argmin_index = 0;
    double argmin_value = std::numeric_limits<double>::quiet_NaN();
    ParamPoint argmin_point;
    // argmax over valid points; the paper's stated selection rule for the
    // absolute-error objective.
    std::size_t argmax_index = 0;
    double argmax_value = std::numeric_limits<double>::quiet_NaN();
    ParamPoint argmax_point;

    bool normalized_model = true;
    unsigned workers_used = 1;
    double wall_seconds = 0.0;  // not serialized into result files
};

struct SublevelRegion {
    double threshold = 0.0;
    std::vector<std::size_t> indices;             // flat indices with G <= threshold
    std::vector<ParamPoint> points;               // same points, expanded
    std::vector<std::pair<double, double>> box;   // per non-fixed axis [lo, hi] covering the set
};

namespace detail {

/// One objective evaluation: solve at lambda, enforce the solver positivity
/// invariant (violations count as a failed point, they are not clamped), and
/// optionally rescale to unit mass.
inline Density evaluate_model_density(const ParamPoint& lambda, const DriftModel& drift,
                                      const SolverConfig& config, bool normalize) {
    SolveResult sol = solve(lambda, drift, config);
    if (sol.diagnostics.min_value < -1e-8)
        throw numeric_error("solver positivity violation (min " +
                                std::to_string(sol.diagnostics.min_value) + ")",
                            sol.diagnostics.steps);
    if (normalize) {
        const double mass = trapezoid_mass(sol.density);
        if (!(mass > 0.0)) throw numeric_error("solver density has no mass", sol.diagnostics.steps);
        for (double& v : sol.density.values) v /= mass;
    }
    return std::move(sol.density);
}

inline void finalize_extrema(SweepResult& r) {
    double best = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double v = r.values[i];
        if (std::isnan(v)) continue;
        any = true;
        if (v < best) {
            best = v;
            r.argmin_index = i;
        }
        if (v > worst) {
            worst = v;
            r.argmax_index = i;
        }
    }
    if (!any) throw numeric_error("sweep: every parameter point failed", 0);
    r.argmin_value = best;
    r.argmin_point = r.space.point_at(r.argmin_index);
    r.argmax_value = worst;
    r.argmax_point = r.space.point_at(r.argmax_index);
}

}  // namespace detail

/// Exhaustive objective evaluation over the parameter grid: one
/// Fokker-Planck solve per point, distance against p_d. Solver instability
/// at a point is recorded and the point excluded from the extrema; the sweep
/// itself carries on. Results are independent of worker count.
inline SweepResult sweep(const ParamSpace& space, const DriftModel& drift, ObjectiveKind objective,
                         const Density& p_d, const SolverConfig& solver_config,
                         const SweepOptions& options = {}) {
    space.validate();
    if (p_d.grid != solver_config.grid)
        throw grid_mismatch_error("sweep: empirical density grid does not match solver grid");

    const std::size_t n = space.total_points();
    SweepResult r;
    r.space = space;
    r.objective = objective;
    r.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    r.normalized_model = options.normalize_model;
    r.workers_used = options.workers;

    std::vector<std::string> errors(n);
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(n, options.workers, [&](std::size_t i) {
        try {
            const Density model =
                detail::evaluate_model_density(space.point_at(i), drift, solver_config, options.normalize_model);
            r.values[i] = evaluate_objective(objective, model, p_d);
        } catch (const numeric_error& e) {
            errors[i] = e.what();
        }
    });
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty()) r.failures.push_back({i, errors[i]});
    detail::finalize_extrema(r);
    return r;
}

/// Sublevel ("optimal estimation") region at a threshold: all grid points
/// with G <= threshold, plus the smallest per-axis interval/box covering
/// them. Contains the argmin whenever the threshold is admissible.
inline SublevelRegion sublevel_region(const SweepResult& r, double threshold) {
    if (!(threshold >= r.argmin_value))
        throw config_error("sublevel_region: threshold below the minimum objective value");
    SublevelRegion region;
    region.threshold = threshold;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        const double v = r.values[i];
        if (!std::isnan(v) && v <= threshold) {
            region.indices.push_back(i);
            region.points.push_back(r.space.point_at(i));
        }
    }
    const auto axes = r.space.axes();
    for (const auto& axis : axes) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const ParamPoint& p : region.points) {
            double c = 0.0;
            if (axis.name == "theta") c = p.theta;
            else if (axis.name == "alpha") c = p.alpha;
            else c = p.epsilon;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        region.box.emplace_back(lo, hi);
    }
    return region;
}

struct ObjectiveComparison {
    struct Row {
        ObjectiveKind objective;
        ParamPoint estimate;        // argmin for hellinger/l2, argmax for absolute-sup
        double objective_value;     // G at the estimate
        ParamPoint argmin_point;    // recorded for every objective
        double argmin_value;
    };
    std::array<SweepResult, 3> sweeps;  // hellinger, relative_l2, absolute_sup
    std::vector<Row> rows;
};

/// Runs the sweep once, reusing each solver solution for all three
/// objectives, and reports the per-objective estimates side by side. The
/// absolute-error row follows the paper's argmax selection convention, with
/// the argmin recorded alongside.
inline ObjectiveComparison compare_objectives(const ParamSpace& space, const DriftModel& drift,
                                              const Density& p_d, const SolverConfig& solver_config,
                                              const SweepOptions& options = {}) {
    space.validate();
    if (p_d.grid != solver_config.grid)
        throw grid_mismatch_error("compare: empirical density grid does not match solver grid");

    const std::size_t n = space.total_points();
    constexpr std::array<ObjectiveKind, 3> kinds = {ObjectiveKind::hellinger, ObjectiveKind::relative_l2,
                                                    ObjectiveKind::absolute_sup};
    ObjectiveComparison cmp;
    for (std::size_t k = 0; k < 3; ++k) {
        cmp.sweeps[k].space = space;
        cmp.sweeps[k].objective = kinds[k];
        cmp.sweeps[k].values.assign(n, std::numeric_limits<double>::quiet_NaN());
        cmp.sweeps[k].normalized_model = options.normalize_model;
        cmp.sweeps[k].workers_used = options.workers;
    }

    std::vector<std::string> errors(n);
    parallel_for(n, options.workers, [&](std::size_t i) {
        try {
            const Density model =
                detail::evaluate_model_density(space.point_at(i), drift, solver_config, options.normalize_model);
            for (std::size_t k = 0; k < 3; ++k)
                cmp.sweeps[k].values[i] = evaluate_objective(kinds[k], model, p_d);
        } catch (const numeric_error& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            if (!errors[i].empty()) cmp.sweeps[k].failures.push_back({i, errors[i]});
        detail::finalize_extrema(cmp.sweeps[k]);
        const SweepResult& s = cmp.sweeps[k];
        const bool use_argmax = kinds[k] == ObjectiveKind::absolute_sup;
        cmp.rows.push_back({kinds[k], use_argmax ? s.argmax_point : s.argmin_point,
                            use_argmax ? s.argmax_value : s.argmin_value, s.argmin_point, s.argmin_value});
    }
    return cmp;
}

}  // namespace levyfit
