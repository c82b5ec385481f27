#pragma once

// Self-contained DFT provider: iterative radix-2 for power-of-two sizes and
// Bluestein's chirp-z reduction for everything else. Double precision,
// engineering sign convention:
//
//   forward:  X[k] = sum_n x[n] exp(-2 pi i k n / N)
//   inverse:  x[n] = (1/N) sum_k X[k] exp(+2 pi i k n / N)
//
// Bluestein chirp phases are reduced with exact integer arithmetic
// (k^2 mod 2N) before any floating-point trig, so large transforms keep
// round-trip accuracy near machine precision instead of losing digits to
// argument reduction.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "cdc/types.hpp"

namespace cdc {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative Cooley-Tukey, n a power of two. Twiddles come from a
// per-call table filled with std::polar, not a multiplicative recurrence,
// to keep the error independent of n.
inline void fft_pow2_inplace(cvector& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    cvector tw(n / 2);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t i = 0; i < n / 2; ++i)
        tw[i] = std::polar(1.0, base * static_cast<double>(i));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n / len;
        for (std::size_t blk = 0; blk < n; blk += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const complexd u = a[blk + j];
                const complexd v = a[blk + j + half] * tw[j * stride];
                a[blk + j] = u + v;
                a[blk + j + half] = u - v;
            }
        }
    }
}

// exp(sign * i pi j^2 / n) with j^2 reduced mod 2n in integer arithmetic.
inline complexd chirp(std::uint64_t j, std::uint64_t n, int sign) {
    const std::uint64_t r = (j * j) % (2 * n);
    return std::polar(1.0, sign * std::numbers::pi * static_cast<double>(r) /
                               static_cast<double>(n));
}

inline cvector bluestein(const cvector& x, int sign) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n - 1);

    cvector u(m, complexd(0.0, 0.0));
    cvector v(m, complexd(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const complexd c = chirp(j, n, sign);
        u[j] = x[j] * c;
        const complexd b = std::conj(c);
        v[j] = b;
        if (j != 0) v[m - j] = b;
    }

    fft_pow2_inplace(u, -1);
    fft_pow2_inplace(v, -1);
    for (std::size_t j = 0; j < m; ++j) u[j] *= v[j];
    fft_pow2_inplace(u, +1);

    cvector out(n);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = u[k] * inv_m * chirp(k, n, sign);
    return out;
}

inline cvector dft(const cvector& x, int sign) {
    if (x.empty()) throw std::invalid_argument("dft: empty input");
    if (is_pow2(x.size())) {
        cvector a = x;
        fft_pow2_inplace(a, sign);
        return a;
    }
    return bluestein(x, sign);
}

}  // namespace detail

/// Forward DFT of any length >= 1.
inline cvector dft_forward(const cvector& x) { return detail::dft(x, -1); }

/// Inverse DFT (includes the 1/N normalization).
inline cvector dft_inverse(const cvector& x) {
    cvector out = detail::dft(x, +1);
    const double inv_n = 1.0 / static_cast<double>(x.size());
    for (auto& c : out) c *= inv_n;
    return out;
}

}  // namespace cdc
