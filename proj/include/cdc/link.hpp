#pragma once

// Monte-Carlo coherent link: Gray 16-QAM, RRC pulse shaping at a rational
// p/q samples per symbol, quadratic-phase dispersion channel, calibrated
// AWGN, dispersion-compensation filtering (either design, realized as direct
// convolution or overlap-save), matched filtering back to one sample per
// symbol, and hard-decision BER counting.
//
// All timing lives on one integer "fine" grid with p positions per symbol:
// symbol k peaks at fine index p*k + c_fine, channel sample n sits at fine
// index q*n. Pulse shaping and matched filtering are then exact polyphase
// sums over the shared RRC prototype, and the decision-point sampling
// instant is an integer formula rather than a measured delay:
//
//   G_i = p*i + q*(tap center) + 2*c_fine
//
// (TX pulse center + compensation filter group delay + matched filter
// center). A cross-correlation against the transmitted symbols verifies
// once per run that the peak is at lag zero; anything else is a hard error,
// since a silent misalignment would masquerade as dispersion penalty.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "cdc/channel.hpp"
#include "cdc/design.hpp"
#include "cdc/dispersion.hpp"
#include "cdc/errors.hpp"
#include "cdc/ola.hpp"
#include "cdc/qam.hpp"
#include "cdc/resample.hpp"
#include "cdc/rng.hpp"
#include "cdc/rrc.hpp"
#include "cdc/types.hpp"

namespace cdc {

enum class CdcMethod { None, ExactInverse, TimeDomain, Proposed };
enum class Realization { Direct, OverlapSave };

inline const char* method_name(CdcMethod m) {
    switch (m) {
        case CdcMethod::None: return "none";
        case CdcMethod::ExactInverse: return "exact-inverse";
        case CdcMethod::TimeDomain: return "time-domain";
        case CdcMethod::Proposed: return "proposed";
    }
    return "?";
}

inline const char* realization_name(Realization r) {
    return r == Realization::Direct ? "direct" : "overlap-save";
}

inline bool parse_method(const std::string& s, CdcMethod& out) {
    for (CdcMethod m : {CdcMethod::None, CdcMethod::ExactInverse,
                        CdcMethod::TimeDomain, CdcMethod::Proposed})
        if (s == method_name(m)) {
            out = m;
            return true;
        }
    return false;
}

inline bool parse_realization(const std::string& s, Realization& out) {
    for (Realization r : {Realization::Direct, Realization::OverlapSave})
        if (s == realization_name(r)) {
            out = r;
            return true;
        }
    return false;
}

/// Compensation filter selection. filter_length applies to the time-domain
/// design; the joint overlap-save design always spans fft_size taps with an
/// unconstrained prefix of fft_size - block_size + 1 (and must be realized
/// by the overlap-save engine, which is the structure it optimizes for).
struct CdcSetup {
    CdcMethod method = CdcMethod::Proposed;
    int fft_size = 256;
    int block_size = 128;
    int filter_length = 129;
    Realization realization = Realization::OverlapSave;
};

struct Oversampling {
    int p = 8;  ///< fine-grid positions per symbol
    int q = 7;  ///< fine-grid positions per channel sample; rate = p/q
};

struct LinkConfig {
    double baud_rate = 60e9;
    Oversampling oversampling;
    double rrc_rolloff = 0.1;
    int rrc_span = 32;
    FiberParams fiber;       ///< sample_period is recomputed from baud and p/q
    double snr_db = 8.0;     ///< Eb/N0 at the decision point; +inf = no noise
    std::uint64_t num_bits = 400000;
    std::uint64_t seed = 1;
    CdcSetup cdc;
};

struct BerPoint {
    std::uint64_t bits_total = 0;
    std::uint64_t bits_error = 0;
    double ber = 0.0;
    /// Normal (Wald) approximation of the binomial 95% interval.
    double ci95_halfwidth = 0.0;
};

/// N/M/L as they will appear in reports: unused dimensions are zero.
struct CdcGeometry {
    int fft_size = 0;
    int block_size = 0;
    int filter_length = 0;
};

inline CdcGeometry resolve_geometry(const CdcSetup& c) {
    switch (c.method) {
        case CdcMethod::TimeDomain:
            if (c.realization == Realization::OverlapSave)
                return {c.fft_size, c.block_size, c.filter_length};
            return {0, 0, c.filter_length};
        case CdcMethod::Proposed:
            return {c.fft_size, c.block_size, c.fft_size - c.block_size + 1};
        default:
            return {0, 0, 0};
    }
}

inline void validate(const LinkConfig& cfg) {
    std::vector<std::string> problems;
    if (!(cfg.baud_rate > 0.0) || !std::isfinite(cfg.baud_rate))
        problems.push_back("baud_rate must be positive and finite");
    const int p = cfg.oversampling.p, q = cfg.oversampling.q;
    if (p < 1 || q < 1 || std::gcd(p, q) != 1)
        problems.push_back("oversampling p/q must be coprime positive integers");
    else if (p <= q)
        problems.push_back("oversampling p/q must exceed 1");
    if (!(cfg.rrc_rolloff > 0.0) || cfg.rrc_rolloff > 1.0)
        problems.push_back("rrc_rolloff must be in (0, 1]");
    if (cfg.rrc_span < 2 || cfg.rrc_span % 2 != 0)
        problems.push_back("rrc_span must be a positive even symbol count");
    try {
        FiberParams fiber = cfg.fiber;
        fiber.sample_period = 1.0;  // recomputed in run_link; not validated here
        validate(fiber);
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    if (std::isnan(cfg.snr_db) ||
        (std::isinf(cfg.snr_db) && cfg.snr_db < 0.0))
        problems.push_back("snr_db must be finite or +inf");
    if (cfg.num_bits == 0 || cfg.num_bits % qam16_bits_per_symbol != 0)
        problems.push_back("num_bits must be a positive multiple of 4");

    const CdcSetup& c = cfg.cdc;
    const bool needs_engine =
        (c.method == CdcMethod::Proposed) ||
        (c.method == CdcMethod::TimeDomain &&
         c.realization == Realization::OverlapSave);
    if (c.method == CdcMethod::TimeDomain &&
        (c.filter_length < 1 || c.filter_length % 2 == 0))
        problems.push_back("cdc.filter_length must be odd and >= 1");
    if (c.method == CdcMethod::Proposed &&
        c.realization == Realization::Direct)
        problems.push_back(
            "the joint design optimizes overlap-save block responses; "
            "realization must be overlap-save");
    if (needs_engine) {
        if (c.fft_size < 1 || c.block_size < 1 ||
            c.block_size > c.fft_size)
            problems.push_back("cdc fft_size/block_size must satisfy 1 <= M <= N");
        else if (c.method == CdcMethod::TimeDomain &&
                 c.filter_length > c.fft_size - c.block_size + 1)
            problems.push_back(
                "time-domain taps need zero padding: filter_length <= "
                "fft_size - block_size + 1");
    }
    if (!problems.empty()) {
        std::string msg = "invalid link config:";
        for (const std::string& s : problems) msg += "\n  - " + s;
        throw config_error(msg);
    }
}

namespace detail {

inline cvector direct_convolve(const cvector& x, const cvector& h) {
    cvector y(x.size(), complexd(0.0, 0.0));
    for (std::size_t n = 0; n < x.size(); ++n) {
        const std::size_t lmax = std::min(h.size() - 1, n);
        for (std::size_t l = 0; l <= lmax; ++l) y[n] += h[l] * x[n - l];
    }
    return y;
}

inline cvector ola_filter_padded(const OlaConfig& cfg, const TapVector& taps,
                                 const cvector& x) {
    const std::size_t m = static_cast<std::size_t>(cfg.block_size);
    cvector padded = x;
    if (padded.size() % m != 0)
        padded.resize(padded.size() + (m - padded.size() % m),
                      complexd(0.0, 0.0));
    cvector y = ola_filter_stream(cfg, taps, padded);
    y.resize(x.size());
    return y;
}

}  // namespace detail

inline BerPoint run_link(const LinkConfig& cfg) {
    validate(cfg);
    const std::int64_t p = cfg.oversampling.p;
    const std::int64_t q = cfg.oversampling.q;

    FiberParams fiber = cfg.fiber;
    fiber.sample_period =
        static_cast<double>(q) / (static_cast<double>(p) * cfg.baud_rate);
    const DispersionK k = dispersion_constant(fiber);

    // Compensation taps and their group delay in channel samples.
    TapVector taps = identity_taps();
    const bool use_engine = (cfg.cdc.method == CdcMethod::Proposed ||
                             cfg.cdc.method == CdcMethod::TimeDomain) &&
                            cfg.cdc.realization == Realization::OverlapSave;
    if (k.value > 0.0) {
        if (cfg.cdc.method == CdcMethod::TimeDomain)
            taps = time_domain_design(cfg.cdc.filter_length, k);
        else if (cfg.cdc.method == CdcMethod::Proposed)
            taps = overlap_save_design(
                make_design_spec(cfg.cdc.fft_size, cfg.cdc.block_size), k);
    }

    // Guard symbols on both sides of the payload cover the circular channel
    // wrap (>= 4 effective filter lengths), the engine warm-up, and the
    // pulse span. The allowance depends only on the method, not on the
    // realization, so direct and overlap-save runs of the same config see
    // identical bits and noise.
    const std::int64_t ns =
        static_cast<std::int64_t>(cfg.num_bits / qam16_bits_per_symbol);
    const std::int64_t l_eff = std::max<std::int64_t>(
        estimate_length(k), static_cast<std::int64_t>(taps.taps.size()));
    const std::int64_t engine_span =
        (cfg.cdc.method == CdcMethod::TimeDomain ||
         cfg.cdc.method == CdcMethod::Proposed)
            ? std::max(0, cfg.cdc.fft_size)
            : 0;
    const std::int64_t guard =
        (q * (4 * l_eff + engine_span) + p - 1) / p + 2 * cfg.rrc_span + 8;
    const std::int64_t total_syms = ns + 2 * guard;

    // The matched cascade is consumed q-strided, so let the pulse correction
    // target those residue classes; otherwise their leakage biases decisions.
    const std::vector<double> pulse =
        rrc_taps(cfg.rrc_rolloff, cfg.rrc_span, static_cast<int>(p),
                 static_cast<int>(q));
    const std::int64_t c_fine =
        static_cast<std::int64_t>(cfg.rrc_span) * p / 2;
    const std::int64_t n_ch =
        (p * (total_syms - 1) + 2 * c_fine) / q + 2;

    Rng bits_rng(derive_seed(cfg.seed, 1));
    Rng noise_rng(derive_seed(cfg.seed, 2));

    std::vector<std::uint8_t> bits(
        static_cast<std::size_t>(total_syms * qam16_bits_per_symbol));
    for (auto& b : bits) b = static_cast<std::uint8_t>(bits_rng.next_u64() & 1);
    const cvector symbols = qam16_map(bits);

    // TX shaping straight to the channel rate.
    const cvector tx = polyphase_filter(symbols, pulse, q, p, 0,
                                        static_cast<std::size_t>(n_ch));

    const cvector channel_out =
        (k.value == 0.0) ? tx : cd_channel(tx, k);
    const cvector received =
        awgn(channel_out, cfg.snr_db, qam16_bits_per_symbol,
             static_cast<double>(p) / static_cast<double>(q), noise_rng);

    cvector equalized;
    std::int64_t tap_delay = 0;
    switch (cfg.cdc.method) {
        case CdcMethod::None:
            equalized = received;
            break;
        case CdcMethod::ExactInverse:
            equalized = (k.value == 0.0)
                            ? received
                            : cd_channel(received, DispersionK{-k.value});
            break;
        default:
            tap_delay = taps.center;
            if (use_engine)
                equalized = detail::ola_filter_padded(
                    OlaConfig{cfg.cdc.fft_size, cfg.cdc.block_size}, taps,
                    received);
            else
                equalized = detail::direct_convolve(received, taps.taps);
            break;
    }

    // Matched filter sampled at symbol instants.
    const std::int64_t mf_offset = q * tap_delay + 2 * c_fine;
    const cvector decision = polyphase_filter(
        equalized, pulse, p, q, mf_offset,
        static_cast<std::size_t>(total_syms));

    // One-shot timing audit: the correlation of decisions against the
    // transmitted symbols must peak at lag zero.
    {
        const std::int64_t window =
            std::min<std::int64_t>(2048, ns);
        const std::int64_t max_lag = std::min<std::int64_t>(guard, 256);
        const std::int64_t start = guard + (ns - window) / 2;
        std::int64_t best_lag = 0;
        double best = -1.0;
        for (std::int64_t lag = -max_lag; lag <= max_lag; ++lag) {
            complexd acc(0.0, 0.0);
            for (std::int64_t i = start; i < start + window; ++i)
                acc += std::conj(symbols[static_cast<std::size_t>(i + lag)]) *
                       decision[static_cast<std::size_t>(i)];
            const double mag = std::abs(acc);
            if (mag > best) {
                best = mag;
                best_lag = lag;
            }
        }
        if (best_lag != 0)
            throw link_error("pipeline misalignment: correlation peak at lag " +
                             std::to_string(best_lag));
    }

    // Data-aided complex gain over the payload, then hard decisions.
    complexd num(0.0, 0.0);
    double den = 0.0;
    for (std::int64_t i = guard; i < guard + ns; ++i) {
        num += std::conj(symbols[static_cast<std::size_t>(i)]) *
               decision[static_cast<std::size_t>(i)];
        den += std::norm(symbols[static_cast<std::size_t>(i)]);
    }
    const complexd gain = num / den;
    if (!(std::abs(gain) > 1e-9))
        throw link_error("no usable signal at the decision point");

    cvector payload(static_cast<std::size_t>(ns));
    for (std::int64_t i = 0; i < ns; ++i)
        payload[static_cast<std::size_t>(i)] =
            decision[static_cast<std::size_t>(guard + i)] / gain;
    const std::vector<std::uint8_t> decided = qam16_demap(payload);

    std::uint64_t errors = 0;
    const std::size_t bit0 =
        static_cast<std::size_t>(guard * qam16_bits_per_symbol);
    for (std::size_t i = 0; i < decided.size(); ++i)
        if (decided[i] != bits[bit0 + i]) ++errors;

    BerPoint out;
    out.bits_total = cfg.num_bits;
    out.bits_error = errors;
    out.ber = static_cast<double>(errors) / static_cast<double>(cfg.num_bits);
    out.ci95_halfwidth =
        1.96 * std::sqrt(out.ber * (1.0 - out.ber) /
                         static_cast<double>(cfg.num_bits));
    return out;
}

enum class SweepAxis { FiberLengthKm, SnrDb, FftSize };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::FiberLengthKm: return "length_km";
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::FftSize: return "fft_size";
    }
    return "?";
}

inline bool parse_axis(const std::string& s, SweepAxis& out) {
    for (SweepAxis a : {SweepAxis::FiberLengthKm, SweepAxis::SnrDb,
                        SweepAxis::FftSize})
        if (s == axis_name(a)) {
            out = a;
            return true;
        }
    return false;
}

struct SweepPoint {
    double axis_value = 0.0;
    LinkConfig config;      ///< fully resolved per-point configuration
    BerPoint result;
    std::string error;      ///< empty on success
};

/// Applies one axis value to a copy of the base config. For the fft_size
/// axis the zero-padding budget N - M + 1 is held fixed (the time-domain
/// length the sweep competes against), so M grows with N.
inline LinkConfig apply_axis(const LinkConfig& base, SweepAxis axis,
                             double value) {
    LinkConfig cfg = base;
    switch (axis) {
        case SweepAxis::FiberLengthKm:
            if (!(value >= 0.0) || !std::isfinite(value))
                throw config_error("fiber length must be finite and >= 0");
            cfg.fiber.length = value * 1000.0;
            break;
        case SweepAxis::SnrDb:
            cfg.snr_db = value;
            break;
        case SweepAxis::FftSize: {
            const int n = static_cast<int>(value);
            if (static_cast<double>(n) != value || n < 1)
                throw config_error("fft_size axis values must be positive integers");
            const int keep =
                (base.cdc.method == CdcMethod::Proposed)
                    ? base.cdc.fft_size - base.cdc.block_size + 1
                    : base.cdc.filter_length;
            cfg.cdc.fft_size = n;
            cfg.cdc.block_size = n - keep + 1;
            break;
        }
    }
    return cfg;
}

/// Independent run_link per axis value. Point 0 reuses the base seed (a
/// one-point sweep is exactly run_link); later points get decorrelated
/// derived seeds. Per-point failures are recorded, not propagated. Results
/// are independent of the worker count.
inline std::vector<SweepPoint> ber_sweep(const LinkConfig& base,
                                         SweepAxis axis,
                                         const std::vector<double>& values,
                                         int jobs = 1) {
    if (values.empty()) throw config_error("ber_sweep: empty axis");
    std::vector<SweepPoint> points(values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepPoint& pt = points[i];
            pt.axis_value = values[i];
            pt.config = base;
            try {
                pt.config = apply_axis(base, axis, values[i]);
                pt.config.seed =
                    i == 0 ? base.seed
                           : derive_seed(base.seed,
                                         static_cast<std::uint64_t>(i));
                pt.result = run_link(pt.config);
            } catch (const std::exception& e) {
                pt.error = e.what();
            }
        }
    };

    const int workers = std::clamp<int>(
        jobs, 1, static_cast<int>(std::min(values.size(),
                                           static_cast<std::size_t>(64))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return points;
}

namespace detail {

inline std::string csv_num(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

inline std::string csv_sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace detail

/// One row per point, stable formatting so reruns are byte-identical.
inline void write_sweep_csv(std::ostream& out,
                            const std::vector<SweepPoint>& points) {
    out << "axis_value,method,N,M,L,z_km,ebn0_db,bits,errors,ber,ci95,error\n";
    for (const SweepPoint& pt : points) {
        const CdcGeometry geo = resolve_geometry(pt.config.cdc);
        out << detail::csv_num("%.12g", pt.axis_value) << ','
            << method_name(pt.config.cdc.method) << ',' << geo.fft_size << ','
            << geo.block_size << ',' << geo.filter_length << ','
            << detail::csv_num("%.12g", pt.config.fiber.length / 1000.0)
            << ',' << detail::csv_num("%.12g", pt.config.snr_db) << ','
            << pt.result.bits_total << ',' << pt.result.bits_error << ','
            << detail::csv_num("%.10e", pt.result.ber) << ','
            << detail::csv_num("%.10e", pt.result.ci95_halfwidth) << ','
            << detail::csv_sanitize(pt.error) << '\n';
    }
}

}  // namespace cdc
