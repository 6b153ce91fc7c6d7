#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "permlz/errors.hpp"

namespace permlz {

using cxd = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Iterative radix-2 Cooley-Tukey, unscaled. sign = -1 forward, +1 backward.
inline void fft_radix2(std::vector<cxd>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw invalid_length("fft_radix2: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = static_cast<double>(sign) * 2.0 * M_PI / static_cast<double>(len);
        const cxd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cxd w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cxd u = a[i + j];
                const cxd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Arbitrary-length DFT via Bluestein's chirp-z reduction to a power-of-two
// convolution. Unscaled, same sign convention as fft_radix2. The chirp uses
// the index square mod 2n to keep the quadratic phase argument bounded.
inline void dft_bluestein(std::vector<cxd>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if (is_pow2(n)) {
        fft_radix2(a, sign);
        return;
    }
    const std::size_t m = next_pow2(2 * n - 1);
    std::vector<cxd> chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t sq = static_cast<std::size_t>(
            (static_cast<unsigned long long>(i) * i) % (2 * n));
        const double ang = static_cast<double>(sign) * M_PI *
                           static_cast<double>(sq) / static_cast<double>(n);
        chirp[i] = cxd(std::cos(ang), std::sin(ang));
    }
    std::vector<cxd> p(m, cxd(0.0, 0.0)), q(m, cxd(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) p[i] = a[i] * chirp[i];
    q[0] = std::conj(chirp[0]);
    for (std::size_t i = 1; i < n; ++i)
        q[i] = q[m - i] = std::conj(chirp[i]);
    fft_radix2(p, -1);
    fft_radix2(q, -1);
    for (std::size_t i = 0; i < m; ++i) p[i] *= q[i];
    fft_radix2(p, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t i = 0; i < n; ++i) a[i] = p[i] * inv_m * chirp[i];
}

inline void dft_forward(std::vector<cxd>& a) { dft_bluestein(a, -1); }

inline void dft_inverse(std::vector<cxd>& a) {
    dft_bluestein(a, +1);
    const double inv_n = 1.0 / static_cast<double>(a.size());
    for (auto& x : a) x *= inv_n;
}

} // namespace permlz
