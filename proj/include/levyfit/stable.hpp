#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace levyfit {

/// Stability index of a symmetric alpha-stable law, restricted to the open
/// interval (0, 2). The Gaussian endpoint alpha = 2 is outside the model
/// class and rejected.
class AlphaIndex {
public:
    explicit AlphaIndex(double a) : value_(a) {
        if (!(a > 0.0) || !(a < 2.0)) throw std::domain_error("alpha must lie in (0, 2)");
    }

    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Jump-measure constant C_alpha = alpha Gamma((1+alpha)/2) /
/// (2^(1-alpha) sqrt(pi) Gamma(1-alpha/2)). With this normalization the pure
/// jump process with Levy measure C_alpha |y|^(-1-alpha) dy has
/// characteristic function exp(-t |xi|^alpha).
inline double c_alpha(AlphaIndex alpha) {
    const double a = alpha.value();
    return a / (std::pow(2.0, 1.0 - a) * std::sqrt(std::numbers::pi)) *
           std::tgamma(0.5 * (1.0 + a)) / std::tgamma(1.0 - 0.5 * a);
}

/// Draws standard symmetric alpha-stable variates (unit scale in the
/// exp(-|xi|^alpha) convention) via the Chambers-Mallows-Stuck transform.
/// The raw engine output is mapped to doubles directly so sequences are
/// reproducible for a given seed across standard-library implementations.
class StableSampler {
public:
    StableSampler(AlphaIndex alpha, std::uint64_t seed)
        : alpha_(alpha.value()), inv_alpha_(1.0 / alpha.value()), engine_(seed) {}

    double operator()() {
        const double u = next_unit();  // (0,1)
        const double v = std::numbers::pi * (u - 0.5);
        const double w = -std::log1p(-next_unit());  // Exp(1), strictly positive

        // Symmetric CMS; the alpha = 1 (Cauchy) case is the exponent-0 limit
        // and needs no special branch.
        const double t1 = std::sin(alpha_ * v) / std::pow(std::cos(v), inv_alpha_);
        const double t2 = std::pow(std::cos((1.0 - alpha_) * v) / w, (1.0 - alpha_) * inv_alpha_);
        return t1 * t2;
    }

    double alpha() const noexcept { return alpha_; }

private:
    double next_unit() {
        // 53-bit mantissa, offset by 2^-54: strictly inside (0,1).
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double alpha_;
    double inv_alpha_;
    std::mt19937_64 engine_;
};

/// count independent standard draws, deterministic for a given seed.
inline std::vector<double> sample_standard(AlphaIndex alpha, std::size_t count, std::uint64_t seed) {
    if (count == 0) throw std::domain_error("sample_standard: count must be positive");
    StableSampler gen(alpha, seed);
    std::vector<double> out(count);
    for (double& x : out) x = gen();
    return out;
}

}  // namespace levyfit
