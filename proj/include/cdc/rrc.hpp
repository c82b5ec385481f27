#pragma once

// Root-raised-cosine pulse prototype on an integer samples-per-symbol grid.
// Signals at a rational p/q samples per symbol are produced by striding
// through this prototype (see resample.hpp), so only the dense integer grid
// is ever materialized.
//
// Plain truncation of the closed-form RRC leaves intersymbol leakage in the
// matched cascade of up to ~4e-3 of the peak at the default 32-symbol span
// (the alpha = 0.1 tails decay like 1/t^2). After truncating, a damped
// Gauss-Newton correction therefore adjusts the taps so the cascade of two
// pulses is Nyquist. When the pulse is consumed by q-striding, the cascade a
// symbol decision actually sees splits by residue class of the sample index
// mod q, and zeroing only the dense-grid lags (the sums over classes) can
// leave, or even amplify, the per-class leakage. The correction therefore
// zeros the per-class strided lags and flattens the per-class gains; with
// stride = 1 this reduces to the plain cascade-Nyquist correction. The
// adjustment is a few 1e-3 of the peak and deterministic.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cdc {

namespace detail {

/// Closed-form RRC sample at t symbols, with both removable singularities
/// (t = 0 and 4*rolloff*|t| = 1; the latter falls exactly on the grid for
/// rolloff = 0.1 when sps is a multiple of 4) taking their limit values.
inline double rrc_closed_form(double rolloff, double t) {
    const double pi = std::numbers::pi;
    if (std::abs(t) < 1e-12) return 1.0 - rolloff + 4.0 * rolloff / pi;
    if (std::abs(4.0 * rolloff * std::abs(t) - 1.0) < 1e-9) {
        const double a = pi / (4.0 * rolloff);
        return rolloff / std::sqrt(2.0) *
               ((1.0 + 2.0 / pi) * std::sin(a) +
                (1.0 - 2.0 / pi) * std::cos(a));
    }
    const double u = 4.0 * rolloff * t;
    return (std::sin(pi * t * (1.0 - rolloff)) +
            u * std::cos(pi * t * (1.0 + rolloff))) /
           (pi * t * (1.0 - u * u));
}

/// Per-residue-class cascade samples of x against itself:
///   w(d, c) = sum over u with u mod stride == c of x[u] * x[sps*d + T-1 - u]
/// for symbol lags d in [-(span-1), span-1] (row d + span - 1). Row span - 1
/// holds the per-class gains; every other entry is leakage into a decision.
/// Summing a row over classes gives the dense-grid cascade sample at that lag.
inline Eigen::MatrixXd strided_cascade(const std::vector<double>& x, int span,
                                       int sps, int stride) {
    const int taps = static_cast<int>(x.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * span - 1, stride);
    for (int d = -(span - 1); d < span; ++d) {
        for (int u = 0; u < taps; ++u) {
            const int j = sps * d + taps - 1 - u;
            if (j >= 0 && j < taps)
                w(d + span - 1, u % stride) +=
                    x[static_cast<std::size_t>(u)] *
                    x[static_cast<std::size_t>(j)];
        }
    }
    return w;
}

/// Total leakage power of a strided cascade relative to the mean per-class
/// gain, averaged over classes. This is what backtracking monitors.
inline double cascade_merit(const Eigen::MatrixXd& w, int span, int stride) {
    const double gain = w.row(span - 1).mean();
    double acc = 0.0;
    for (int row = 0; row < w.rows(); ++row) {
        if (row == span - 1) continue;
        acc += w.row(row).squaredNorm();
    }
    return acc / (stride * gain * gain);
}

/// Damped Gauss-Newton in folded (even-symmetric) coordinates driving the
/// per-class strided cascade toward Nyquist: leakage rows toward zero and the
/// per-class gains toward their mean. A small Tikhonov pull toward the
/// starting taps keeps the steps well conditioned, and only steps that shrink
/// the leakage are accepted, so the result is never worse than the input.
inline void nyquist_correct(std::vector<double>& x, int span, int sps,
                            int stride) {
    const int taps = static_cast<int>(x.size());
    const int half = (taps + 1) / 2;
    const int rows = stride * (span - 1) + stride;
    const double reg = 1e-3;
    const std::vector<double> x0 = x;
    const auto fold = [taps](int n) { return std::min(n, taps - 1 - n); };

    for (int iter = 0; iter < 40; ++iter) {
        const Eigen::MatrixXd w = strided_cascade(x, span, sps, stride);
        const double base = cascade_merit(w, span, stride);

        Eigen::MatrixXd af = Eigen::MatrixXd::Zero(rows + half, half);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(rows + half);
        int row = 0;
        for (int d = 1; d < span; ++d) {
            for (int c = 0; c < stride; ++c, ++row) {
                r(row) = w(d + span - 1, c);
                for (int u = c; u < taps; u += stride) {
                    const int j = sps * d + taps - 1 - u;
                    if (j >= 0 && j < taps) {
                        af(row, fold(u)) += x[static_cast<std::size_t>(j)];
                        af(row, fold(j)) += x[static_cast<std::size_t>(u)];
                    }
                }
            }
        }
        // Gain-uniformity rows: each class gain minus the mean over classes.
        Eigen::MatrixXd gchk = Eigen::MatrixXd::Zero(stride, half);
        for (int c = 0; c < stride; ++c) {
            for (int u = c; u < taps; u += stride) {
                const int j = taps - 1 - u;
                gchk(c, fold(u)) += x[static_cast<std::size_t>(j)];
                gchk(c, fold(j)) += x[static_cast<std::size_t>(u)];
            }
        }
        const Eigen::RowVectorXd gmean = gchk.colwise().mean();
        const double wmean = w.row(span - 1).mean();
        for (int c = 0; c < stride; ++c, ++row) {
            r(row) = w(span - 1, c) - wmean;
            af.row(row) = gchk.row(c) - gmean;
        }
        // Tikhonov rows pulling toward the starting taps.
        for (int h = 0; h < half; ++h, ++row) af(row, h) = reg;
        for (int n = 0; n < taps; ++n)
            r(rows + fold(n)) +=
                reg * (x[static_cast<std::size_t>(n)] -
                       x0[static_cast<std::size_t>(n)]) / 2.0;

        const Eigen::VectorXd step_half =
            af.colPivHouseholderQr().solve(-r);

        double scale = 1.0;
        bool accepted = false;
        for (int tries = 0; tries < 15; ++tries) {
            std::vector<double> cand = x;
            double energy = 0.0;
            for (int n = 0; n < taps; ++n) {
                cand[static_cast<std::size_t>(n)] +=
                    scale * step_half(fold(n));
                energy += cand[static_cast<std::size_t>(n)] *
                          cand[static_cast<std::size_t>(n)];
            }
            const double enorm = 1.0 / std::sqrt(energy);
            for (double& v : cand) v *= enorm;
            const Eigen::MatrixXd wc = strided_cascade(cand, span, sps, stride);
            if (cascade_merit(wc, span, stride) < base) {
                x = cand;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) return;
    }
}

}  // namespace detail

/// Unit-energy RRC taps, length span_symbols * sps + 1, even-symmetric about
/// the center index span_symbols * sps / 2, with the matched cascade forced
/// Nyquist as described above. span_symbols must be even so the center lands
/// on the grid. Pass the q of a p/q-rate consumer as stride so the correction
/// targets the residue classes that consumer's decisions actually see;
/// stride = 1 corrects the dense-grid cascade only.
inline std::vector<double> rrc_taps(double rolloff, int span_symbols, int sps,
                                    int stride = 1) {
    if (!(rolloff > 0.0) || rolloff > 1.0)
        throw std::invalid_argument("rrc_taps: rolloff must be in (0, 1]");
    if (span_symbols < 2 || span_symbols % 2 != 0)
        throw std::invalid_argument("rrc_taps: span must be a positive even symbol count");
    if (sps < 1) throw std::invalid_argument("rrc_taps: sps must be >= 1");
    if (stride < 1) throw std::invalid_argument("rrc_taps: stride must be >= 1");

    const int center = span_symbols * sps / 2;
    std::vector<double> g(static_cast<std::size_t>(span_symbols * sps + 1));
    for (int d = 0; d <= center; ++d) {
        const double v =
            detail::rrc_closed_form(rolloff, static_cast<double>(d) / sps);
        g[static_cast<std::size_t>(center + d)] = v;
        g[static_cast<std::size_t>(center - d)] = v;
    }

    double energy = 0.0;
    for (double v : g) energy += v * v;
    for (double& v : g) v /= std::sqrt(energy);

    detail::nyquist_correct(g, span_symbols, sps, stride);

    // The correction moves the energy slightly off 1; restore it exactly and
    // re-mirror so symmetry holds bit for bit.
    energy = 0.0;
    for (double v : g) energy += v * v;
    const double scale = 1.0 / std::sqrt(energy);
    for (int d = 0; d <= center; ++d) {
        const double v = g[static_cast<std::size_t>(center + d)] * scale;
        g[static_cast<std::size_t>(center + d)] = v;
        g[static_cast<std::size_t>(center - d)] = v;
    }
    return g;
}

}  // namespace cdc
