#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "levyfit/grid.hpp"
#include "levyfit/parallel.hpp"
#include "levyfit/trajectory.hpp"

namespace levyfit {

/// Bandwidth rule h = 1.8 s n^(-1/5), with s the sample standard deviation.
/// For heavy-tailed samples s is still finite and is used as-is; the caller
/// records the resulting bandwidth alongside the output.
inline double bandwidth(const Trajectory& t) {
    if (t.values.size() < 2) throw config_error("bandwidth: need at least 2 observations");
    const TrajectorySummary s = summarize(t);
    if (!(s.stddev > 0.0)) throw std::domain_error("bandwidth: degenerate data (zero standard deviation)");
    if (!std::isfinite(s.stddev)) throw std::domain_error("bandwidth: standard deviation is not finite");
    return 1.8 * s.stddev * std::pow(static_cast<double>(s.n), -0.2);
}

enum class KdeMode {
    direct,  // exact O(n*m) summation
    binned,  // linear binning onto a 2^12 lattice, then kernel sums over the lattice
    automatic,  // direct up to 10^6 observations, binned above
};

namespace detail {

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779;

inline std::vector<double> kde_direct(const std::vector<double>& obs, const Grid1D& grid, double h,
                                      unsigned workers) {
    const double inv_h = 1.0 / h;
    const double norm = inv_sqrt_2pi * inv_h / static_cast<double>(obs.size());
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t j) {
        const double x = grid.node(j);
        double s = 0.0;
        for (double y : obs) {
            const double z = (x - y) * inv_h;
            s += std::exp(-0.5 * z * z);
        }
        out[j] = s * norm;
    });
    return out;
}

// Linear binning: each observation splits its unit weight between the two
// nearest lattice nodes. Observations farther than 8 bandwidths outside the
// grid carry kernel mass below 1e-14/h at every node and are dropped.
inline std::vector<double> kde_binned(const std::vector<double>& obs, const Grid1D& grid, double h,
                                      unsigned workers) {
    constexpr std::size_t lattice_size = std::size_t{1} << 12;
    const double lo = grid.a() - 8.0 * h;
    const double hi = grid.b() + 8.0 * h;
    const double delta = (hi - lo) / static_cast<double>(lattice_size - 1);

    std::vector<double> counts(lattice_size, 0.0);
    for (double y : obs) {
        if (y < lo || y > hi) continue;
        const double c = (y - lo) / delta;
        auto i0 = static_cast<std::size_t>(c);
        if (i0 >= lattice_size - 1) i0 = lattice_size - 2;
        const double frac = c - static_cast<double>(i0);
        counts[i0] += 1.0 - frac;
        counts[i0 + 1] += frac;
    }

    const double inv_h = 1.0 / h;
    const double norm = inv_sqrt_2pi * inv_h / static_cast<double>(obs.size());
    std::vector<double> out(grid.size());
    parallel_for(grid.size(), workers, [&](std::size_t j) {
        const double x = grid.node(j);
        double s = 0.0;
        for (std::size_t l = 0; l < lattice_size; ++l) {
            if (counts[l] == 0.0) continue;
            const double z = (x - (lo + delta * static_cast<double>(l))) * inv_h;
            s += counts[l] * std::exp(-0.5 * z * z);
        }
        out[j] = s * norm;
    });
    return out;
}

}  // namespace detail

/// Gaussian-kernel density estimate p_d(x) = (1/(n h)) sum phi((x - y_i)/h)
/// at every grid node. Observations outside (a, b) still contribute kernel
/// mass to interior nodes. The binned path must agree with the direct path
/// to 1e-4 in sup norm.
inline Density estimate_density(const Trajectory& t, const Grid1D& grid, double h,
                                KdeMode mode = KdeMode::automatic, unsigned workers = 1) {
    if (!(h > 0.0) || !std::isfinite(h)) throw config_error("kde: bandwidth must be positive");
    if (t.values.empty()) throw config_error("kde: no observations");

    const bool binned = mode == KdeMode::binned ||
                        (mode == KdeMode::automatic && t.values.size() > 1'000'000);
    std::vector<double> v = binned ? detail::kde_binned(t.values, grid, h, workers)
                                   : detail::kde_direct(t.values, grid, h, workers);
    return Density(grid, std::move(v));
}

/// Fraction of observations lying outside [a, b]; reported as a diagnostic
/// when the estimate feeds a domain-truncated distance.
inline double exterior_fraction(const Trajectory& t, const Grid1D& grid) {
    std::size_t out = 0;
    for (double y : t.values)
        if (y < grid.a() || y > grid.b()) ++out;
    return static_cast<double>(out) / static_cast<double>(t.values.size());
}

}  // namespace levyfit
