#pragma once

#include <stdexcept>

namespace levyfit {

/// One candidate lambda = (theta, alpha, epsilon) in parameter space.
struct ParamPoint {
    double theta = 1.0;
    double alpha = 1.5;
    double epsilon = 0.5;
};

/// Bounds shared by the solver and the estimator: alpha in (0,2),
/// epsilon in (0,1].
inline void validate_param_point(const ParamPoint& p) {
    if (!(p.alpha > 0.0) || !(p.alpha < 2.0)) throw std::domain_error("alpha must lie in (0, 2)");
    if (!(p.epsilon > 0.0) || !(p.epsilon <= 1.0)) throw std::domain_error("epsilon must lie in (0, 1]");
}

}  // namespace levyfit
