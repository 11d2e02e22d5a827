#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "levyfit/drift.hpp"
#include "levyfit/errors.hpp"
#include "levyfit/stable.hpp"

namespace levyfit {

/// Discretely sampled path observations y_1..y_n at spacing dt, starting
/// from x0 (values[0] is the state at t = 0).
struct Trajectory {
    std::vector<double> values;
    double dt = 0.0;
    double x0 = 0.0;
};

struct TrajectorySummary {
    std::size_t n = 0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1 denominator)
    double min = 0.0;
    double max = 0.0;
};

inline TrajectorySummary summarize(const Trajectory& t) {
    TrajectorySummary s;
    s.n = t.values.size();
    double acc = 0.0;
    s.min = t.values.front();
    s.max = t.values.front();
    for (double v : t.values) {
        acc += v;
        if (v < s.min) s.min = v;
        if (v > s.max) s.max = v;
    }
    s.mean = acc / static_cast<double>(s.n);
    double sq = 0.0;
    for (double v : t.values) {
        const double d = v - s.mean;
        sq += d * d;
    }
    s.stddev = s.n > 1 ? std::sqrt(sq / static_cast<double>(s.n - 1)) : 0.0;
    return s;
}

/// Euler-Maruyama path of dX = f(X) dt + eps dL^alpha:
///   X_{k+1} = X_k + f(X_k) dt + eps dt^(1/alpha) xi_k
/// with xi_k standard symmetric alpha-stable draws. Records every
/// `record_every`-th state (1 = every step), so the returned sampling step is
/// dt * record_every. Aborts with the step index if the state leaves the
/// finite range; clipping would bias the density tails downstream.
inline Trajectory simulate_thinned(const DriftModel& drift, AlphaIndex alpha, double epsilon,
                                   double x0, double dt, std::size_t n, std::uint64_t seed,
                                   std::size_t record_every = 1) {
    if (!(dt > 0.0)) throw config_error("simulate: dt must be positive");
    if (n < 2) throw config_error("simulate: need at least 2 observations");
    if (!(epsilon >= 0.0)) throw config_error("simulate: epsilon must be nonnegative");
    if (record_every == 0) throw config_error("simulate: record_every must be positive");

    StableSampler gen(alpha, seed);
    const double noise_scale = epsilon * std::pow(dt, 1.0 / alpha.value());

    Trajectory out;
    out.dt = dt * static_cast<double>(record_every);
    out.x0 = x0;
    out.values.reserve(n);
    out.values.push_back(x0);

    double x = x0;
    const std::size_t total_steps = (n - 1) * record_every;
    for (std::size_t k = 0; k < total_steps; ++k) {
        double incr = drift(x) * dt;
        if (epsilon > 0.0) incr += noise_scale * gen();
        x += incr;
        if (!std::isfinite(x)) throw numeric_error("simulate: state became non-finite", k + 1);
        if ((k + 1) % record_every == 0) out.values.push_back(x);
    }
    return out;
}

inline Trajectory simulate(const DriftModel& drift, AlphaIndex alpha, double epsilon, double x0,
                           double dt, std::size_t n, std::uint64_t seed) {
    return simulate_thinned(drift, alpha, epsilon, x0, dt, n, seed, 1);
}

}  // namespace levyfit
