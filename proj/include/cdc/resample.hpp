#pragma once

// Rational-rate polyphase filtering. The core evaluates
//
//   y[m] = sum_k x[k] * proto[m * out_step - k * in_step + offset]
//
// on a common fine grid where input samples sit in_step apart and output
// samples out_step apart; out-of-range prototype indices contribute zero and
// x is treated as zero outside its extent. Pulse shaping, matched filtering
// and rate conversion are all instances of this sum with different
// prototypes and offsets.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cdc/types.hpp"

namespace cdc {

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// sin(pi n/m) / (pi n/m) with exact zeros at nonzero multiples of m.
inline double sinc_rational(std::int64_t n, std::int64_t m) {
    if (n % m == 0) return n == 0 ? 1.0 : 0.0;
    const double x = std::numbers::pi * static_cast<double>(n) /
                     static_cast<double>(m);
    return std::sin(x) / x;
}

inline double kaiser_window(double frac, double beta) {
    const double arg = 1.0 - frac * frac;
    if (arg <= 0.0) return 0.0;
    return std::cyl_bessel_i(0.0, beta * std::sqrt(arg)) /
           std::cyl_bessel_i(0.0, beta);
}

}  // namespace detail

inline cvector polyphase_filter(const cvector& x,
                                const std::vector<double>& proto,
                                std::int64_t out_step, std::int64_t in_step,
                                std::int64_t offset, std::size_t out_len) {
    if (proto.empty() || out_step < 1 || in_step < 1)
        throw std::invalid_argument("polyphase_filter: bad prototype or steps");
    const std::int64_t taps = static_cast<std::int64_t>(proto.size());
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    cvector y(out_len, complexd(0.0, 0.0));
    for (std::size_t m = 0; m < out_len; ++m) {
        const std::int64_t base =
            static_cast<std::int64_t>(m) * out_step + offset;
        std::int64_t k_lo = detail::floor_div(base - (taps - 1) + in_step - 1,
                                              in_step);
        std::int64_t k_hi = detail::floor_div(base, in_step);
        if (k_lo < 0) k_lo = 0;
        if (k_hi > n - 1) k_hi = n - 1;
        complexd acc(0.0, 0.0);
        for (std::int64_t k = k_lo; k <= k_hi; ++k)
            acc += x[static_cast<std::size_t>(k)] *
                   proto[static_cast<std::size_t>(base - k * in_step)];
        y[m] = acc;
    }
    return y;
}

/// Kaiser-windowed sinc anti-alias prototype for a p/q rate change, built on
/// the fine grid (input spacing p). Centered, odd length, DC gain p so the
/// conversion is unit gain. For p = q = 1 it degenerates to a pure delta.
inline std::vector<double> resample_prototype(int p, int q,
                                              int half_span_inputs = 64,
                                              double beta = 10.0) {
    const std::int64_t band = std::max(p, q);
    const std::int64_t half =
        static_cast<std::int64_t>(half_span_inputs) * band;
    std::vector<double> h(static_cast<std::size_t>(2 * half + 1));
    const double gain = static_cast<double>(p) / static_cast<double>(band);
    for (std::int64_t i = -half; i <= half; ++i)
        h[static_cast<std::size_t>(i + half)] =
            gain * detail::sinc_rational(i, band) *
            detail::kaiser_window(static_cast<double>(i) /
                                      static_cast<double>(half),
                                  beta);
    return h;
}

/// Resamples x to p/q times its rate; output sample m corresponds to input
/// time m*q/p (no extra delay). p and q must be coprime positive integers.
inline cvector rational_resample(const cvector& x, int p, int q) {
    if (p < 1 || q < 1 || std::gcd(p, q) != 1)
        throw std::invalid_argument(
            "rational_resample: p and q must be coprime positive integers");
    const std::vector<double> proto = resample_prototype(p, q);
    const std::int64_t half = (static_cast<std::int64_t>(proto.size()) - 1) / 2;
    const std::size_t out_len =
        (x.size() * static_cast<std::size_t>(p) +
         static_cast<std::size_t>(q) - 1) /
        static_cast<std::size_t>(q);
    return polyphase_filter(x, proto, q, p, half, out_len);
}

}  // namespace cdc
