#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "levyfit/errors.hpp"

namespace levyfit {

/// Drift field f(x, theta). Built-in kinds:
///   cubic:  f(x) = -theta x^3 + x
///   linear: f(x) = -theta x
/// A custom polynomial drift is f(x) = base(x) + theta * scaled(x) with both
/// parts given by ascending-power coefficients; the built-ins are special
/// cases of that form.
class DriftModel {
public:
    enum class Kind { cubic, linear, polynomial };

    static DriftModel cubic(double theta) { return DriftModel(Kind::cubic, theta, {}, {}); }
    static DriftModel linear(double theta) { return DriftModel(Kind::linear, theta, {}, {}); }
    static DriftModel polynomial(std::vector<double> base, std::vector<double> scaled, double theta) {
        if (base.empty() && scaled.empty()) throw config_error("drift: polynomial needs coefficients");
        return DriftModel(Kind::polynomial, theta, std::move(base), std::move(scaled));
    }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::cubic: return -theta_ * x * x * x + x;
            case Kind::linear: return -theta_ * x;
            case Kind::polynomial: return horner(base_, x) + theta_ * horner(scaled_, x);
        }
        return 0.0;  // unreachable
    }

    Kind kind() const noexcept { return kind_; }
    double theta() const noexcept { return theta_; }

    /// Same drift shape with a different parameter value (used by sweeps).
    DriftModel with_theta(double theta) const {
        DriftModel d = *this;
        d.theta_ = theta;
        return d;
    }

private:
    DriftModel(Kind k, double theta, std::vector<double> base, std::vector<double> scaled)
        : kind_(k), theta_(theta), base_(std::move(base)), scaled_(std::move(scaled)) {}

    static double horner(const std::vector<double>& c, double x) {
        double r = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    Kind kind_;
    double theta_;
    std::vector<double> base_;
    std::vector<double> scaled_;
};

}  // namespace levyfit
