#pragma once

// Gray-labeled square 16-QAM with unit average symbol energy, plus the exact
// AWGN bit-error-rate reference curve used to calibrate simulations.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdc/types.hpp"

namespace cdc {

inline constexpr int qam16_bits_per_symbol = 4;

namespace detail {

// Per-rail Gray code: 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3. Adjacent
// amplitude levels differ in exactly one bit. Scaling by 1/sqrt(10) makes
// the average energy of the 16 constellation points exactly 1.
inline double qam16_rail(std::uint8_t hi, std::uint8_t lo) {
    static const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
    const int index = hi ? (lo ? 2 : 3) : (lo ? 1 : 0);
    return levels[index] / std::sqrt(10.0);
}

inline void qam16_unrail(double v, std::uint8_t& hi, std::uint8_t& lo) {
    const double t = v * std::sqrt(10.0);
    if (t < -2.0) {
        hi = 0; lo = 0;
    } else if (t < 0.0) {
        hi = 0; lo = 1;
    } else if (t < 2.0) {
        hi = 1; lo = 1;
    } else {
        hi = 1; lo = 0;
    }
}

}  // namespace detail

/// Bits (values 0/1, four per symbol, I pair then Q pair) to symbols.
inline cvector qam16_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % qam16_bits_per_symbol != 0)
        throw std::invalid_argument("qam16_map: bit count must be a multiple of 4");
    cvector out(bits.size() / qam16_bits_per_symbol);
    for (std::size_t s = 0; s < out.size(); ++s) {
        const std::size_t b = 4 * s;
        out[s] = complexd(detail::qam16_rail(bits[b], bits[b + 1]),
                          detail::qam16_rail(bits[b + 2], bits[b + 3]));
    }
    return out;
}

/// Minimum-distance hard decision back to bits.
inline std::vector<std::uint8_t> qam16_demap(const cvector& symbols) {
    std::vector<std::uint8_t> bits(symbols.size() * qam16_bits_per_symbol);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        const std::size_t b = 4 * s;
        detail::qam16_unrail(symbols[s].real(), bits[b], bits[b + 1]);
        detail::qam16_unrail(symbols[s].imag(), bits[b + 2], bits[b + 3]);
    }
    return bits;
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

/// Exact bit error rate of Gray-coded 16-QAM over AWGN at the given Eb/N0.
/// Averages the per-bit error probabilities of the two bits on each rail.
inline double theoretical_ber_16qam(double ebn0_db) {
    if (std::isinf(ebn0_db) && ebn0_db > 0.0) return 0.0;
    if (!std::isfinite(ebn0_db))
        throw std::invalid_argument("theoretical_ber_16qam: Eb/N0 must be finite or +inf");
    const double gamma_b = std::pow(10.0, ebn0_db / 10.0);
    const double s = std::sqrt(0.8 * gamma_b);
    return 0.75 * q_function(s) + 0.5 * q_function(3.0 * s) -
           0.25 * q_function(5.0 * s);
}

inline std::size_t count_bit_errors(const std::vector<std::uint8_t>& a,
                                    const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("count_bit_errors: length mismatch");
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++n;
    return n;
}

}  // namespace cdc
