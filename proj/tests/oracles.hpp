#pragma once

// Test-only reference implementations, independent of the library code paths
// they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracles {

/// Lanczos approximation of the Gamma function (g = 7, n = 9), accurate to
/// about 1e-13 relative over the arguments used here. Deliberately not
/// std::tgamma, so c_alpha gets checked against an independent route.
inline double lanczos_gamma(double x) {
    static const double coeff[9] = {
        0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double a = coeff[0];
    const double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coeff[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline double c_alpha_reference(double a) {
    return a / (std::pow(2.0, 1.0 - a) * std::sqrt(std::numbers::pi)) *
           lanczos_gamma(0.5 * (1.0 + a)) / lanczos_gamma(1.0 - 0.5 * a);
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// 1% two-sample critical value, c(0.01) sqrt((n+m)/(n m)).
inline double ks_critical_1pct(std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return 1.628 * std::sqrt((nn + mm) / (nn * mm));
}

/// Least-squares slope of log10 P(|X| > y) against log10 y over log-spaced
/// thresholds; the survival exponent estimate for heavy-tailed samples.
inline double tail_slope(const std::vector<double>& samples, double y_lo, double y_hi,
                         std::size_t n_points = 20) {
    std::vector<double> absx(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) absx[i] = std::abs(samples[i]);
    std::sort(absx.begin(), absx.end());

    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < n_points; ++k) {
        const double y = y_lo * std::pow(y_hi / y_lo, static_cast<double>(k) / (n_points - 1));
        const auto it = std::upper_bound(absx.begin(), absx.end(), y);
        const auto exceed = static_cast<double>(absx.end() - it);
        if (exceed < 5.0) break;  // too few exceedances for a stable point
        lx.push_back(std::log10(y));
        ly.push_back(std::log10(exceed / static_cast<double>(absx.size())));
    }
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sx += lx[k];
        sy += ly[k];
        sxx += lx[k] * lx[k];
        sxy += lx[k] * ly[k];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Characteristic-function inversion of the symmetric alpha-stable density,
/// optionally convolved with a Gaussian N(0, 1/(2 precision)):
///   p(x) = (1/pi) int_0^inf cos(xi x) exp(-t xi^alpha - xi^2/(4 precision)) dxi
/// Composite Simpson quadrature; the integrand decays fast enough that a
/// finite cutoff is exact to double precision.
class StableDensityOracle {
public:
    StableDensityOracle(double alpha, double t, double gaussian_precision = 0.0,
                        std::size_t n_intervals = 60000) {
        double cutoff = std::pow(40.0 / t, 1.0 / alpha) + 1.0;
        if (gaussian_precision > 0.0)
            cutoff = std::min(cutoff, std::sqrt(40.0 * 4.0 * gaussian_precision) + 1.0);
        n_ = n_intervals % 2 == 0 ? n_intervals : n_intervals + 1;
        dxi_ = cutoff / static_cast<double>(n_);
        weights_.resize(n_ + 1);
        for (std::size_t i = 0; i <= n_; ++i) {
            const double xi = dxi_ * static_cast<double>(i);
            double g = std::exp(-t * std::pow(xi, alpha));
            if (gaussian_precision > 0.0) g *= std::exp(-xi * xi / (4.0 * gaussian_precision));
            double w = (i == 0 || i == n_) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            weights_[i] = w * g;
        }
    }

    double operator()(double x) const {
        double s = 0.0;
        for (std::size_t i = 0; i <= n_; ++i) s += weights_[i] * std::cos(dxi_ * static_cast<double>(i) * x);
        return s * dxi_ / 3.0 / std::numbers::pi;
    }

private:
    std::size_t n_;
    double dxi_;
    std::vector<double> weights_;
};

/// Exact flow of the cubic ODE dx/dt = -theta x^3 + x (Bernoulli reduction,
/// u = x^-2 relaxes linearly to theta).
inline double cubic_flow(double x0, double theta, double t) {
    if (x0 == 0.0) return 0.0;
    const double u0 = 1.0 / (x0 * x0);
    const double u = theta + (u0 - theta) * std::exp(-2.0 * t);
    return (x0 > 0 ? 1.0 : -1.0) / std::sqrt(u);
}

}  // namespace oracles
