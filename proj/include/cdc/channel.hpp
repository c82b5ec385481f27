#pragma once

// Channel-side signal operations: the quadratic-phase allpass that models
// chromatic dispersion, and calibrated AWGN loading.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cdc/dispersion.hpp"
#include "cdc/fft.hpp"
#include "cdc/rng.hpp"
#include "cdc/types.hpp"

namespace cdc {

/// Applies the dispersion allpass exp(-j K theta^2) across the full-length
/// DFT of x, with theta the principal-value bin frequency in (-pi, pi].
/// Exact and circular, so callers discard guard samples at both ends.
/// Negating K applies the exact inverse on the same grid.
inline cvector cd_channel(const cvector& x, DispersionK k) {
    const std::size_t n = x.size();
    if (n < 2)
        throw std::invalid_argument("cd_channel: signal needs at least 2 samples");
    cvector spec = dft_forward(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double cycles = (2 * i <= n)
                                  ? static_cast<double>(i)
                                  : static_cast<double>(i) - static_cast<double>(n);
        const double theta = 2.0 * std::numbers::pi * cycles /
                             static_cast<double>(n);
        spec[i] *= std::polar(1.0, -k.value * theta * theta);
    }
    return dft_inverse(spec);
}

inline double signal_power(const cvector& x) {
    double p = 0.0;
    for (const complexd& v : x) p += std::norm(v);
    return x.empty() ? 0.0 : p / static_cast<double>(x.size());
}

/// Adds circular complex Gaussian noise sized from the measured signal power
/// so that Eb/N0 at the one-sample-per-symbol decision point equals the
/// target: noise variance per sample = P * samples_per_symbol / (Es/N0).
/// ebn0_db = +infinity is the documented "no noise" flag.
inline cvector awgn(const cvector& x, double ebn0_db, int bits_per_symbol,
                    double samples_per_symbol, Rng& rng) {
    if (std::isinf(ebn0_db) && ebn0_db > 0.0) return x;
    if (!std::isfinite(ebn0_db))
        throw std::invalid_argument("awgn: Eb/N0 must be finite or +inf");
    if (bits_per_symbol < 1 || !(samples_per_symbol > 0.0))
        throw std::invalid_argument("awgn: bad bits or samples per symbol");
    const double power = signal_power(x);
    if (!(power > 0.0) || !std::isfinite(power))
        throw std::invalid_argument("awgn: signal power must be positive and finite");

    const double gamma_s =
        bits_per_symbol * std::pow(10.0, ebn0_db / 10.0);
    const double sigma = std::sqrt(power * samples_per_symbol / gamma_s / 2.0);

    cvector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double g0 = 0.0, g1 = 0.0;
        rng.next_gaussian_pair(g0, g1);
        out[i] = x[i] + complexd(sigma * g0, sigma * g1);
    }
    return out;
}

}  // namespace cdc
