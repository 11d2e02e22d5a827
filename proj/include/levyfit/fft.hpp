#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace levyfit::detail {

/// Iterative radix-2 complex FFT, in place. n must be a power of two.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

/// Applies a symmetric Toeplitz kernel with zero diagonal to a vector,
/// out[j] = sum_{k!=0} kernel[|k|] * in[j+k], indices outside [0, m) treated
/// as zero. Backed by circulant embedding; one instance is not safe for
/// concurrent use (scratch buffers are members).
class SymmetricToeplitz {
public:
    /// kernel[k] for offsets k = 1..kernel.size(); m = vector length.
    SymmetricToeplitz(std::span<const double> kernel, std::size_t m) : m_(m) {
        std::size_t need = 2 * m_;
        n_ = 1;
        while (n_ < need) n_ <<= 1;
        khat_.assign(n_, {0.0, 0.0});
        for (std::size_t k = 1; k <= kernel.size() && k < m_; ++k) {
            khat_[k] = {kernel[k - 1], 0.0};
            khat_[n_ - k] = {kernel[k - 1], 0.0};
        }
        fft_radix2(khat_, false);
        scratch_.assign(n_, {0.0, 0.0});
    }

    void apply(std::span<const double> in, std::span<double> out) {
        for (std::size_t i = 0; i < n_; ++i)
            scratch_[i] = i < m_ ? std::complex<double>(in[i], 0.0) : std::complex<double>(0.0, 0.0);
        fft_radix2(scratch_, false);
        for (std::size_t i = 0; i < n_; ++i) scratch_[i] *= khat_[i];
        fft_radix2(scratch_, true);
        for (std::size_t j = 0; j < m_; ++j) out[j] = scratch_[j].real();
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<std::complex<double>> khat_;
    std::vector<std::complex<double>> scratch_;
};

}  // namespace levyfit::detail
