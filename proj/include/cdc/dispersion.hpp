#pragma once

// Fiber and sampling parameters, and the single dimensionless constant that
// controls how strongly chromatic dispersion spreads a sampled signal.
//
// A fiber of length z with dispersion parameter D (s/m^2) at carrier
// wavelength lambda, sampled with period T, acts as the allpass
// exp(-j K (w T)^2) with K = D lambda^2 z / (4 pi c T^2). The compensating
// filter needs roughly 2 floor(2 K pi) + 1 taps: the group delay of the
// channel varies by 2 K (w T) samples across the Nyquist band, plus one
// center tap.

#include <cmath>
#include <stdexcept>

#include "cdc/errors.hpp"

namespace cdc {

inline constexpr double speed_of_light = 299792458.0;  // m/s

/// Dimensionless dispersion constant K (see header comment).
struct DispersionK {
    double value = 0.0;
};

struct FiberParams {
    double dispersion = 17.0e-6;    ///< D, s/m^2 (17e-6 = 17 ps/(nm km))
    double wavelength = 1550.0e-9;  ///< carrier wavelength, m
    double length = 0.0;            ///< fiber length z, m
    /// Sampling period T of the compensating filter, s. Default matches a
    /// 60 GBd symbol rate oversampled by 8/7.
    double sample_period = 7.0 / (8.0 * 60.0e9);
};

inline void validate(const FiberParams& p) {
    if (!std::isfinite(p.dispersion) || !std::isfinite(p.wavelength) ||
        !std::isfinite(p.length) || !std::isfinite(p.sample_period))
        throw std::invalid_argument("FiberParams: all fields must be finite");
    if (p.wavelength <= 0.0)
        throw std::invalid_argument("FiberParams: wavelength must be positive");
    if (p.sample_period <= 0.0)
        throw std::invalid_argument("FiberParams: sample period must be positive");
    if (p.length < 0.0)
        throw std::invalid_argument("FiberParams: fiber length must be >= 0");
}

inline DispersionK dispersion_constant(const FiberParams& p) {
    validate(p);
    const double t2 = p.sample_period * p.sample_period;
    return {p.dispersion * p.wavelength * p.wavelength * p.length /
            (4.0 * M_PI * speed_of_light * t2)};
}

/// Estimated compensating-filter length 2 floor(2 K pi) + 1; always odd.
inline int estimate_length(DispersionK k) {
    if (!(k.value >= 0.0))
        throw std::invalid_argument("estimate_length: K must be >= 0");
    const double two_k_pi = 2.0 * k.value * M_PI;
    if (two_k_pi > 1e9)
        throw std::invalid_argument("estimate_length: K out of supported range");
    return 2 * static_cast<int>(std::floor(two_k_pi)) + 1;
}

/// Longest fiber a given odd filter length can serve, by the continuous
/// inverse of the length estimate (no floor): z = (L-1) c T^2 / (D lambda^2).
inline double max_fiber_length(int taps, const FiberParams& p) {
    if (taps < 1 || taps % 2 == 0)
        throw std::invalid_argument("max_fiber_length: taps must be odd and >= 1");
    FiberParams q = p;
    q.length = 0.0;  // validate the remaining fields
    validate(q);
    if (p.dispersion == 0.0)
        throw std::invalid_argument("max_fiber_length: dispersion must be nonzero");
    const double t2 = p.sample_period * p.sample_period;
    return (taps - 1) * speed_of_light * t2 /
           (std::abs(p.dispersion) * p.wavelength * p.wavelength);
}

}  // namespace cdc
