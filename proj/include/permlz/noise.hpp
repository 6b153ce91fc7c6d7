#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "permlz/errors.hpp"
#include "permlz/fft.hpp"
#include "permlz/rng.hpp"
#include "permlz/series.hpp"

namespace permlz {

// Stochastic generators: power-law "K-noise" by spectral shaping of uniform
// noise, fractional Gaussian noise by circulant embedding of its covariance,
// and fractional Brownian motion as the running sum of an FGN draw.

struct KNoiseSpec {
    double k = 0.0; // power spectrum ~ 1/f^k
    std::size_t length = 0;
    std::uint64_t seed = 0;
};

// Shapes an iid uniform base sequence: forward transform, multiply bin
// magnitudes by f^(-k/2) (Hermitian-symmetrized), inverse transform, drop
// the imaginary residue. The base is centered on its sample mean, so the DC
// bin is ~0 before it is zeroed and k = 0 returns the base itself up to
// transform round-trip error. Output is nonGaussian for k > 0.
inline TimeSeries k_noise(const KNoiseSpec& spec) {
    const std::size_t n = spec.length;
    if (n < 2) throw invalid_length("k_noise: length must be >= 2");
    if (spec.k < 0.0) throw invalid_config("k_noise: exponent k must be >= 0");

    SplitMix64 rng(spec.seed);
    std::vector<cxd> a(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform01() - 0.5;
        a[i] = cxd(u, 0.0);
        mean += u;
    }
    mean /= static_cast<double>(n);
    for (auto& x : a) x -= mean;

    dft_forward(a);
    a[0] = cxd(0.0, 0.0);
    const std::size_t half = n / 2;
    for (std::size_t i = 1; i <= half; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n);
        a[i] *= std::pow(f, -spec.k / 2.0);
    }
    for (std::size_t i = 1; i < n - half; ++i) a[n - i] = std::conj(a[i]);
    dft_inverse(a);

    double max_re = 0.0, max_im = 0.0;
    for (const auto& x : a) {
        max_re = std::max(max_re, std::fabs(x.real()));
        max_im = std::max(max_im, std::fabs(x.imag()));
    }
    if (max_im > 1e-8 * std::max(max_re, 1e-300))
        throw error("k_noise: inverse transform not real (residue " +
                    std::to_string(max_im) + ")");

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
    return TimeSeries{std::move(out), "k_noise(k=" + std::to_string(spec.k) + ")",
                      spec.seed};
}

// FGN covariance C(u) = ((|u+1|^2H - 2|u|^2H + |u-1|^2H)) / 2; C(0) = 1.
inline double fgn_covariance(double hurst, double lag) {
    const double u = std::fabs(lag);
    const double e = 2.0 * hurst;
    return 0.5 * (std::pow(u + 1.0, e) - 2.0 * std::pow(u, e) +
                  std::pow(std::fabs(u - 1.0), e));
}

enum class FractionalKind { fgn, fbm };

struct FractionalSpec {
    double hurst = 0.5;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    FractionalKind kind = FractionalKind::fgn;
};

namespace detail {

// Exact-covariance stationary Gaussian draw by circulant embedding
// (Davies-Harte construction on a power-of-two circle).
inline std::vector<double> circulant_fgn(double hurst, std::size_t n, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw invalid_config("fractional noise: Hurst exponent must be in (0,1), got " +
                             std::to_string(hurst));
    if (n == 0) return {};

    const std::size_t m = next_pow2(2 * std::max<std::size_t>(n, 2));
    std::vector<cxd> row(m);
    for (std::size_t j = 0; j <= m / 2; ++j)
        row[j] = cxd(fgn_covariance(hurst, static_cast<double>(j)), 0.0);
    for (std::size_t j = 1; j < m / 2; ++j) row[m - j] = row[j];

    fft_radix2(row, -1);
    double lam_max = 0.0, lam_min = 0.0;
    for (const auto& l : row) {
        lam_max = std::max(lam_max, l.real());
        lam_min = std::min(lam_min, l.real());
    }
    if (lam_min < -1e-8 * lam_max)
        throw embedding_not_psd("circulant embedding has eigenvalue " +
                                std::to_string(lam_min) + " for H=" +
                                std::to_string(hurst) + ", n=" + std::to_string(n));

    GaussianSampler g(seed);
    const double inv_m = 1.0 / static_cast<double>(m);
    std::vector<cxd> spec(m);
    spec[0] = cxd(std::sqrt(std::max(row[0].real(), 0.0) * inv_m) * g.next(), 0.0);
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double c = std::sqrt(std::max(row[k].real(), 0.0) * inv_m * 0.5);
        const double u = g.next(), v = g.next();
        spec[k] = cxd(c * u, c * v);
        spec[m - k] = std::conj(spec[k]);
    }
    spec[m / 2] = cxd(std::sqrt(std::max(row[m / 2].real(), 0.0) * inv_m) * g.next(), 0.0);

    fft_radix2(spec, +1); // unscaled; the 1/m is already inside the amplitudes
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = spec[i].real();
    return out;
}

// Running sum of the raw increments: position 0 is 0, position t is
// sum of increments < t. FGN draws are defined as the first differences of
// this sum, which makes fbm/fgn draws of the same seed mutually consistent
// bit for bit.
inline std::vector<double> fbm_path(double hurst, std::size_t n_points, std::uint64_t seed) {
    if (n_points == 0) return {};
    const std::vector<double> raw = circulant_fgn(hurst, n_points - 1, seed);
    std::vector<double> path(n_points);
    path[0] = 0.0;
    for (std::size_t t = 1; t < n_points; ++t) path[t] = path[t - 1] + raw[t - 1];
    return path;
}

} // namespace detail

inline TimeSeries fgn(const FractionalSpec& spec) {
    if (spec.length == 0) throw invalid_length("fgn: length must be >= 1");
    const std::vector<double> path = detail::fbm_path(spec.hurst, spec.length + 1, spec.seed);
    std::vector<double> out(spec.length);
    for (std::size_t t = 0; t < spec.length; ++t) out[t] = path[t + 1] - path[t];
    return TimeSeries{std::move(out), "fgn(H=" + std::to_string(spec.hurst) + ")",
                      spec.seed};
}

inline TimeSeries fbm(const FractionalSpec& spec) {
    if (spec.length == 0) throw invalid_length("fbm: length must be >= 1");
    return TimeSeries{detail::fbm_path(spec.hurst, spec.length, spec.seed),
                      "fbm(H=" + std::to_string(spec.hurst) + ")", spec.seed};
}

inline TimeSeries fractional_noise(const FractionalSpec& spec) {
    return spec.kind == FractionalKind::fbm ? fbm(spec) : fgn(spec);
}

} // namespace permlz
