#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "levyfit/errors.hpp"

namespace levyfit {

/// Uniform spatial grid over an interval (a, b); node 0 sits at a and node
/// m-1 at b. Interior nodes are 1..m-2.
class Grid1D {
public:
    Grid1D(double a, double b, std::size_t m) : a_(a), b_(b), m_(m) {
        if (!(a < b)) throw config_error("grid: require a < b");
        if (m < 3) throw config_error("grid: require at least 3 nodes");
        if (!std::isfinite(a) || !std::isfinite(b)) throw config_error("grid: endpoints must be finite");
    }

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t size() const noexcept { return m_; }
    double spacing() const noexcept { return (b_ - a_) / static_cast<double>(m_ - 1); }
    double node(std::size_t i) const noexcept { return a_ + spacing() * static_cast<double>(i); }

    bool operator==(const Grid1D& o) const noexcept { return a_ == o.a_ && b_ == o.b_ && m_ == o.m_; }
    bool operator!=(const Grid1D& o) const noexcept { return !(*this == o); }

private:
    double a_;
    double b_;
    std::size_t m_;
};

/// Grid-aligned density values (empirical or solver output). Values are
/// nonnegative up to a small solver tolerance; the trapezoid mass may fall
/// below 1 for absorbing solutions or truncated kernel estimates.
struct Density {
    Grid1D grid;
    std::vector<double> values;

    Density(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw config_error("density: values size must match grid");
    }

    static Density zeros(const Grid1D& g) { return Density(g, std::vector<double>(g.size(), 0.0)); }
};

/// Composite trapezoid quadrature of nodal values over the grid.
inline double trapezoid(const Grid1D& g, const std::vector<double>& v) {
    const double h = g.spacing();
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * h;
}

inline double trapezoid_mass(const Density& d) { return trapezoid(d.grid, d.values); }

}  // namespace levyfit
