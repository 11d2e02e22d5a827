#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "levyfit/errors.hpp"
#include "levyfit/grid.hpp"

namespace levyfit {

enum class ObjectiveKind { hellinger, relative_l2, absolute_sup };

inline const char* objective_name(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::hellinger: return "hellinger";
        case ObjectiveKind::relative_l2: return "relative_l2";
        case ObjectiveKind::absolute_sup: return "absolute_sup";
    }
    return "?";
}

namespace detail {

inline void require_same_grid(const Density& p, const Density& q) {
    if (p.grid != q.grid) throw grid_mismatch_error("densities live on different grids");
}

// Square roots need nonnegative input; solver output may carry negatives down
// to -1e-8 which are clamped here and only here. Anything below that is an
// invariant violation upstream and must not be masked.
inline double clamped(double v, std::size_t* count) {
    if (v >= 0.0) return v;
    if (v < -1e-8) throw std::domain_error("density value below -1e-8 passed to a distance");
    if (count) ++*count;
    return 0.0;
}

}  // namespace detail

/// Squared Hellinger distance 0.5 * integral (sqrt(p) - sqrt(q))^2 by
/// composite trapezoid on the shared grid. Symmetric in its arguments;
/// lies in [0, 1] for unit-mass inputs.
inline double hellinger_sq(const Density& p, const Density& q, std::size_t* clamped_count = nullptr) {
    detail::require_same_grid(p, q);
    const std::size_t m = p.grid.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = std::sqrt(detail::clamped(p.values[j], clamped_count)) -
                         std::sqrt(detail::clamped(q.values[j], clamped_count));
        const double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    return 0.5 * acc * p.grid.spacing();
}

/// ||p - q||_2^2 / ||q||_2^2 with trapezoid quadrature.
inline double relative_l2(const Density& p, const Density& q) {
    detail::require_same_grid(p, q);
    const std::size_t m = p.grid.size();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double w = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
        const double d = p.values[j] - q.values[j];
        num += w * d * d;
        den += w * q.values[j] * q.values[j];
    }
    if (den == 0.0) throw std::domain_error("relative_l2: reference density is identically zero");
    return num / den;
}

/// Max over grid nodes of |p - q|.
inline double absolute_sup(const Density& p, const Density& q) {
    detail::require_same_grid(p, q);
    double mx = 0.0;
    for (std::size_t j = 0; j < p.grid.size(); ++j)
        mx = std::max(mx, std::abs(p.values[j] - q.values[j]));
    return mx;
}

inline double evaluate_objective(ObjectiveKind kind, const Density& p, const Density& q) {
    switch (kind) {
        case ObjectiveKind::hellinger: return hellinger_sq(p, q);
        case ObjectiveKind::relative_l2: return relative_l2(p, q);
        case ObjectiveKind::absolute_sup: return absolute_sup(p, q);
    }
    throw std::logic_error("unknown objective");
}

}  // namespace levyfit
