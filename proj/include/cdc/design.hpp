#pragma once

// Least-squares FIR design for chromatic dispersion compensation.
//
// Two designs are provided for a compensating filter used inside an
// overlap-save convolution engine with FFT size N and M new samples per
// block (nominal filter length L = N - M + 1, odd):
//
//   * time_domain_design: the classic length-L filter that minimizes the
//     band-limited LS distance to the target response
//     exp(+j K (w T)^2) exp(-j (L-1)/2 w T) on its own.
//   * overlap_save_design: a length-N tap vector that additionally assigns
//     values to the positions a zero-padded filter would leave empty. The
//     engine applies a cyclically rotated copy of the response to each of
//     the M outputs of a block, so the design minimizes the *sum* of the M
//     per-output LS errors. At full bandwidth the normal equations decouple
//     and the optimum has a closed form; for a restricted band they are
//     solved numerically (SVD) instead of by explicit inversion.
//
// All spectra are expressed in normalized frequency x = w T over the design
// band [-Omega, Omega], Omega in (0, pi].

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdc/complex_erf.hpp"
#include "cdc/dispersion.hpp"
#include "cdc/errors.hpp"
#include "cdc/types.hpp"

namespace cdc {

inline constexpr double full_band = std::numbers::pi;

namespace detail {
inline bool is_full_band(double omega) {
    return omega >= std::numbers::pi - 1e-12;
}
}  // namespace detail

/// Complex FIR taps plus the index of the tap that carries lag zero of the
/// designed response (the bulk group delay).
struct TapVector {
    cvector taps;
    int center = 0;
};

/// Single unit tap: the identity filter, used when there is no dispersion
/// to compensate. Pass an odd length > 1 to get a centered pure delay.
inline TapVector identity_taps(int length = 1) {
    if (length < 1 || length % 2 == 0)
        throw std::invalid_argument("identity_taps: length must be odd");
    TapVector t;
    t.taps.assign(static_cast<std::size_t>(length), complexd(0.0, 0.0));
    t.center = (length - 1) / 2;
    t.taps[static_cast<std::size_t>(t.center)] = 1.0;
    return t;
}

/// Geometry of one overlap-save configuration.
struct DesignSpec {
    int fft_size = 0;       ///< N
    int block_size = 0;     ///< M new samples per block
    int filter_length = 0;  ///< L = N - M + 1, odd
    double omega = full_band;
};

inline void validate(const DesignSpec& s) {
    std::string problems;
    if (s.fft_size < 1) problems += " fft_size must be >= 1;";
    if (s.block_size < 1 || s.block_size > s.fft_size)
        problems += " block_size must be in [1, fft_size];";
    if (s.filter_length != s.fft_size - s.block_size + 1)
        problems += " filter_length must equal fft_size - block_size + 1;";
    if (s.filter_length % 2 == 0) problems += " filter_length must be odd;";
    if (!(s.omega > 0.0) || s.omega > std::numbers::pi + 1e-9)
        problems += " omega must lie in (0, pi];";
    if (!problems.empty()) throw config_error("DesignSpec invalid:" + problems);
}

inline DesignSpec make_design_spec(int fft_size, int block_size,
                                   double omega = full_band) {
    DesignSpec s{fft_size, block_size, fft_size - block_size + 1, omega};
    validate(s);
    s.omega = std::min(omega, std::numbers::pi);
    return s;
}

/// Ideal compensating tap at (real) lag d for dispersion constant K over the
/// band [-Omega, Omega]:
///
///   D(d) = (1/2pi) Int_{-Omega}^{Omega} exp(j K x^2) exp(j d x) dx
///
/// evaluated in closed form through the complex error function. K must be
/// positive; the K = 0 identity is handled by identity_taps, not here.
inline complexd ideal_tap(double d, DispersionK k,
                          double omega = full_band) {
    if (!(k.value > 0.0))
        throw std::domain_error("ideal_tap: K must be positive");
    if (!(omega > 0.0) || omega > std::numbers::pi + 1e-9)
        throw std::domain_error("ideal_tap: omega must lie in (0, pi]");
    if (!std::isfinite(d)) throw std::domain_error("ideal_tap: d must be finite");

    const double sqrt_k = std::sqrt(k.value);
    const double scale = 1.0 / (2.0 * sqrt_k);
    const double edge = 2.0 * k.value * omega;
    // exp(-j pi/4) ray; combining the square completed in x with t = (x +
    // d/2K) sqrt(K) exp(-j pi/4) maps the band integral onto erf.
    const complexd ray(std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0);
    const complexd sum = erf_complex(ray * ((edge + d) * scale)) +
                         erf_complex(ray * ((edge - d) * scale));
    const complexd pref =
        std::polar(1.0, std::numbers::pi / 4.0 - d * d / (4.0 * k.value)) /
        (4.0 * std::sqrt(std::numbers::pi * k.value));
    return pref * sum;
}

/// Symmetric Toeplitz Gram matrix of the delay basis {exp(-j m x)} over
/// [-Omega, Omega], stored as its first row:
///   Q(m, n) = sin(Omega (m-n)) / ((m-n) pi),  Q(m, m) = Omega / pi.
/// Omega = pi gives the identity.
struct GramMatrix {
    std::vector<double> first_row;
    double omega = full_band;

    int size() const { return static_cast<int>(first_row.size()); }
    double entry(int i, int j) const {
        return first_row[static_cast<std::size_t>(std::abs(i - j))];
    }
};

inline GramMatrix gram_matrix(int n, double omega = full_band) {
    if (n < 1) throw std::invalid_argument("gram_matrix: n must be >= 1");
    if (!(omega > 0.0) || omega > std::numbers::pi + 1e-9)
        throw std::invalid_argument("gram_matrix: omega must lie in (0, pi]");
    GramMatrix q;
    q.omega = omega;
    q.first_row.resize(static_cast<std::size_t>(n));
    q.first_row[0] = omega / std::numbers::pi;
    for (int p = 1; p < n; ++p)
        q.first_row[static_cast<std::size_t>(p)] =
            std::sin(omega * p) / (p * std::numbers::pi);
    return q;
}

/// Ideal-tap target vector for block output m: entry i is the ideal tap at
/// lag i - (L-1)/2 - m, i = 0 .. N-1.
inline cvector rhs_vector(int m, const DesignSpec& spec, DispersionK k) {
    validate(spec);
    if (m < 0 || m >= spec.block_size)
        throw std::invalid_argument("rhs_vector: m must lie in [0, block_size)");
    const int center = (spec.filter_length - 1) / 2;
    cvector d(static_cast<std::size_t>(spec.fft_size));
    for (int i = 0; i < spec.fft_size; ++i)
        d[static_cast<std::size_t>(i)] =
            ideal_tap(i - center - m, k, spec.omega);
    return d;
}

/// Cyclic delay by m positions: out[l] = in[(l - m) mod N]. Negative m
/// rotates the other way. The center index is reported unchanged; it refers
/// to the unrotated response.
inline TapVector cyclic_shift(const TapVector& h, int m) {
    const int n = static_cast<int>(h.taps.size());
    if (n == 0) throw std::invalid_argument("cyclic_shift: empty taps");
    TapVector out;
    out.center = h.center;
    out.taps.resize(h.taps.size());
    const int shift = ((m % n) + n) % n;
    for (int l = 0; l < n; ++l)
        out.taps[static_cast<std::size_t>(l)] =
            h.taps[static_cast<std::size_t>((l - shift + n) % n)];
    return out;
}

namespace detail {

// Solve the real-symmetric system A x = b for complex b via SVD, guarding
// against ill-conditioned Gram matrices (tiny Omega). Returns the solution
// through x; throws solver_error with a condition estimate on failure.
inline void solve_spd_svd(const Eigen::MatrixXd& a, const cvector& b,
                          cvector& x) {
    const Eigen::Index n = a.rows();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a,
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(n - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
        throw solver_error(
            "least-squares solve is ill-conditioned (condition estimate " +
                std::to_string(smin > 0.0 ? smax / smin
                                          : std::numeric_limits<double>::infinity()) +
                "); widen omega or shorten the filter",
            smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity());

    Eigen::VectorXd br(n), bi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        br(i) = b[static_cast<std::size_t>(i)].real();
        bi(i) = b[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::VectorXd xr = svd.solve(br);
    const Eigen::VectorXd xi = svd.solve(bi);

    double res = 0.0, rhs = 0.0;
    const Eigen::VectorXd rr = a * xr - br;
    const Eigen::VectorXd ri = a * xi - bi;
    res = rr.squaredNorm() + ri.squaredNorm();
    rhs = br.squaredNorm() + bi.squaredNorm();
    if (rhs > 0.0 && std::sqrt(res / rhs) > 1e-8)
        throw solver_error("least-squares residual check failed",
                           smax / smin);

    x.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        x[static_cast<std::size_t>(i)] = complexd(xr(i), xi(i));
}

}  // namespace detail

/// Classic length-L band-limited LS design against the dispersion-inverse
/// target with bulk delay (L-1)/2. L must be odd; K positive.
inline TapVector time_domain_design(int filter_length, DispersionK k,
                                    double omega = full_band) {
    if (filter_length < 1 || filter_length % 2 == 0)
        throw std::invalid_argument(
            "time_domain_design: filter length must be odd and >= 1");
    if (!(k.value > 0.0))
        throw std::domain_error("time_domain_design: K must be positive");

    const int center = (filter_length - 1) / 2;
    TapVector h;
    h.center = center;
    h.taps.resize(static_cast<std::size_t>(filter_length));

    if (detail::is_full_band(omega)) {
        // Q = I: the LS fit is the ideal-tap window itself.
        for (int i = 0; i < filter_length; ++i)
            h.taps[static_cast<std::size_t>(i)] = ideal_tap(i - center, k);
        return h;
    }

    const GramMatrix q = gram_matrix(filter_length, omega);
    Eigen::MatrixXd qm(filter_length, filter_length);
    for (int i = 0; i < filter_length; ++i)
        for (int j = 0; j < filter_length; ++j) qm(i, j) = q.entry(i, j);
    cvector d(static_cast<std::size_t>(filter_length));
    for (int i = 0; i < filter_length; ++i)
        d[static_cast<std::size_t>(i)] = ideal_tap(i - center, k, omega);
    detail::solve_spd_svd(qm, d, h.taps);
    return h;
}

/// Joint per-output LS design of the full length-N tap vector used by the
/// overlap-save engine (see header comment). Returns N taps whose first L
/// positions play the role of the conventional filter and whose remaining
/// M-1 positions are the normally-zero-padded ones.
inline TapVector overlap_save_design(const DesignSpec& spec, DispersionK k) {
    validate(spec);
    if (!(k.value > 0.0))
        throw std::domain_error("overlap_save_design: K must be positive");

    const int n = spec.fft_size;
    const int m_blk = spec.block_size;
    const int ell = spec.filter_length;
    const int center = (ell - 1) / 2;

    TapVector h;
    h.center = center;
    h.taps.resize(static_cast<std::size_t>(n));

    if (detail::is_full_band(spec.omega)) {
        // Normal equations decouple (R = M I). First L taps: the ideal
        // window. Remaining taps: averages of the two ideal taps that the
        // cyclic rotations place at that position.
        for (int i = 0; i < ell; ++i)
            h.taps[static_cast<std::size_t>(i)] = ideal_tap(i - center, k);
        for (int j = 1; j < m_blk; ++j) {
            const complexd a = ideal_tap(center + j, k);
            const complexd b = ideal_tap(center + m_blk - j, k);
            h.taps[static_cast<std::size_t>(ell - 1 + j)] =
                (static_cast<double>(m_blk - j) * a + static_cast<double>(j) * b) /
                static_cast<double>(m_blk);
        }
        return h;
    }

    // Band-limited case: accumulate R = sum_m S_m^T Q S_m without forming
    // the permutations. For entries (i, j) the rotation (i+m, j+m) mod N
    // switches between gram offsets |i-j| and N-|i-j| depending on whether
    // one or both indices wrap, which is a simple count over m.
    const GramMatrix q = gram_matrix(n, spec.omega);
    Eigen::MatrixXd r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const int delta = i - j;
            const int wrap_hi = n - i;  // smallest m that wraps index i
            const int wrap_lo = n - j;
            const int one_wrapped = std::max(
                0, std::min(wrap_lo, m_blk) - std::min(wrap_hi, m_blk));
            const double val =
                static_cast<double>(m_blk - one_wrapped) *
                    q.first_row[static_cast<std::size_t>(delta)] +
                static_cast<double>(one_wrapped) *
                    q.first_row[static_cast<std::size_t>(n - delta)
                                    % static_cast<std::size_t>(n)];
            r(i, j) = val;
            r(j, i) = val;
        }
    }

    // e_i = sum_m D(((i+m) mod N) - center - m): the unwrapped terms are all
    // D(i - center); each wrapped term is D(i - N - center).
    cvector e(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int wraps = std::max(0, i + m_blk - n);  // m >= n - i wrap
        const complexd plain = ideal_tap(i - center, k, spec.omega);
        if (wraps == 0) {
            e[static_cast<std::size_t>(i)] =
                static_cast<double>(m_blk) * plain;
        } else {
            const complexd wrapped = ideal_tap(i - n - center, k, spec.omega);
            e[static_cast<std::size_t>(i)] =
                static_cast<double>(m_blk - wraps) * plain +
                static_cast<double>(wraps) * wrapped;
        }
    }

    detail::solve_spd_svd(r, e, h.taps);
    return h;
}

/// Frequency response H(x) = sum_l taps[l] exp(-j l x) at the given
/// normalized frequencies.
inline cvector frequency_response(const TapVector& h,
                                  const std::vector<double>& x) {
    cvector out(x.size());
    for (std::size_t g = 0; g < x.size(); ++g) {
        const complexd step = std::polar(1.0, -x[g]);
        complexd phase(1.0, 0.0);
        complexd acc(0.0, 0.0);
        for (const complexd& t : h.taps) {
            acc += t * phase;
            phase *= step;
        }
        out[g] = acc;
    }
    return out;
}

/// Total LS design error: the sum over the M block outputs of the mean
/// squared deviation between the rotated response and the delayed
/// dispersion-inverse target over [-Omega, Omega],
///
///   sum_m (1/2pi) Int |H_m(x) - exp(jKx^2) exp(-j((L-1)/2 + m) x)|^2 dx,
///
/// approximated with a midpoint rule. grid_points = 0 picks 16 N points.
/// Use the same grid size when comparing two designs so the quadrature bias
/// cancels. Taps shorter than N are implicitly zero-padded.
inline double total_ls_error(const TapVector& h, const DesignSpec& spec,
                             DispersionK k, int grid_points = 0) {
    validate(spec);
    if (!(k.value > 0.0))
        throw std::domain_error("total_ls_error: K must be positive");
    if (static_cast<int>(h.taps.size()) > spec.fft_size)
        throw std::invalid_argument("total_ls_error: taps longer than fft_size");
    const int n = spec.fft_size;
    const int g_count = grid_points > 0 ? grid_points : 16 * n;

    TapVector padded = h;
    padded.taps.resize(static_cast<std::size_t>(n), complexd(0.0, 0.0));

    const double step = 2.0 * spec.omega / g_count;
    const int center = (spec.filter_length - 1) / 2;

    double err = 0.0;
    for (int m = 0; m < spec.block_size; ++m) {
        const TapVector hm = cyclic_shift(padded, m);
        for (int g = 0; g < g_count; ++g) {
            const double x = -spec.omega + (g + 0.5) * step;
            const complexd ph_step = std::polar(1.0, -x);
            complexd phase(1.0, 0.0);
            complexd resp(0.0, 0.0);
            for (const complexd& t : hm.taps) {
                resp += t * phase;
                phase *= ph_step;
            }
            const complexd target =
                std::polar(1.0, k.value * x * x - (center + m) * x);
            err += std::norm(resp - target) * step;
        }
    }
    return err / (2.0 * std::numbers::pi);
}

}  // namespace cdc
