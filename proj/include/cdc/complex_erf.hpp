#pragma once

// Error function of a complex argument, double precision.
//
// The plane is reduced to the first quadrant through the exact symmetries
// erf(-z) = -erf(z) and erf(conj z) = conj(erf z), then split into regions:
//
//   * Maclaurin series for Re z <= 2.5 and |z| <= 13. The worst-case
//     cancellation there is bounded by exp(2 Re(z)^2) ~ 3e5, so the series
//     keeps ~1e-10 relative accuracy.
//   * Otherwise erf z = 1 - exp(-z^2) w(i z) with the Faddeeva function w
//     evaluated in the closed upper half plane:
//       - midpoint-rule discretization of the Cauchy integral
//         w(q) = (i/pi) Int exp(-t^2)/(q - t) dt with step h = 0.2 while
//         Im q <= 30; the discretization error is O(exp(Im(q)^2 - Re(q)^2
//         - 2 pi Im(q)/h)), below 1e-17 everywhere this branch is selected,
//       - the Laplace continued fraction for Im q > 30.
//
// Arguments on the imaginary axis give exactly imaginary results. Values
// overflow to inf once |erf z| itself exceeds the double range (the function
// grows like exp(Im(z)^2 - Re(z)^2)); that is the honest limit of the type.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace cdc {

namespace detail {

inline constexpr double erf_two_over_sqrt_pi = 1.1283791670955125739;

inline std::complex<double> erf_series(std::complex<double> z) {
    const std::complex<double> mz2 = -(z * z);
    std::complex<double> term = z;
    std::complex<double> sum = z;
    for (int n = 1; n < 500; ++n) {
        // term_n / term_{n-1} for the series sum z^(2n+1) (-1)^n / (n! (2n+1))
        term *= mz2 * (static_cast<double>(2 * n - 1) /
                       (static_cast<double>(n) * static_cast<double>(2 * n + 1)));
        sum += term;
        if (std::norm(term) <= 1e-36 * std::norm(sum)) break;
    }
    return erf_two_over_sqrt_pi * sum;
}

// w(q) for Im q >= 0 via the midpoint rule on the defining integral. Nodes
// t_k = (k + 1/2) h never collide with q here: the branch is only taken for
// Im q >= 2.5 or |q| > 13, while the nodes lie on the real axis below 6.7.
inline std::complex<double> faddeeva_midpoint(std::complex<double> q) {
    static constexpr double h = 0.2;
    static constexpr int terms = 34;
    struct Table {
        std::array<double, terms> t2, e;
        Table() {
            for (int k = 0; k < terms; ++k) {
                const double t = (k + 0.5) * h;
                t2[k] = t * t;
                e[k] = std::exp(-t * t);
            }
        }
    };
    static const Table tab;

    const std::complex<double> q2 = q * q;
    std::complex<double> sum = 0.0;
    for (int k = 0; k < terms; ++k) sum += tab.e[k] / (q2 - tab.t2[k]);
    return std::complex<double>(0.0, 2.0 * h / std::numbers::pi) * (q * sum);
}

// Laplace continued fraction, backward recurrence. Used only for |q| >= 30
// where a short fraction already reaches full double accuracy.
inline std::complex<double> faddeeva_cfrac(std::complex<double> q) {
    std::complex<double> u = 0.0;
    for (int k = 26; k >= 1; --k) u = (0.5 * k) / (q - u);
    return std::complex<double>(0.0, std::numbers::inv_sqrtpi) / (q - u);
}

inline std::complex<double> erf_quadrant1(std::complex<double> z) {
    const double x = z.real();
    if (x <= 2.5 && std::norm(z) <= 169.0) return erf_series(z);

    const std::complex<double> q(-z.imag(), x);  // i z, Im q = x >= 0
    const std::complex<double> w =
        (x <= 30.0) ? faddeeva_midpoint(q) : faddeeva_cfrac(q);
    return 1.0 - std::exp(-(z * z)) * w;
}

}  // namespace detail

/// erf(z) for complex z. Throws std::domain_error on non-finite input.
inline std::complex<double> erf_complex(std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("erf_complex: argument must be finite");

    const bool flip_sign = z.real() < 0.0;
    if (flip_sign) z = -z;
    const bool flip_conj = z.imag() < 0.0;
    if (flip_conj) z = std::conj(z);

    std::complex<double> r = detail::erf_quadrant1(z);
    if (z.real() == 0.0) r = {0.0, r.imag()};  // odd symmetry pins Re to 0
    if (flip_conj) r = std::conj(r);
    if (flip_sign) r = -r;
    return r;
}

}  // namespace cdc
