#pragma once

// Overlap-save block convolution. Each block transforms the window
// [previous N-M samples | M new samples], multiplies by the tap spectrum and
// keeps the last M time-domain outputs, which align one-to-one with the M
// new inputs (an identity tap vector reproduces the input with zero delay).
//
// With taps confined to the first L <= N - M + 1 positions (zero padding)
// the engine computes the exact causal linear convolution of the stream,
// treating samples before the start as zero. Designs may instead populate
// all N tap positions; each of the M outputs of a block then sees its own
// cyclically rotated copy of the response, which is precisely the structure
// the joint least-squares design optimizes for. In that case the first
// N - M outputs of a fresh engine are computed against the zero-seeded
// history (warm-up; see warmup_length()).

#include <cstddef>
#include <stdexcept>

#include "cdc/design.hpp"
#include "cdc/errors.hpp"
#include "cdc/fft.hpp"
#include "cdc/types.hpp"

namespace cdc {

struct OlaConfig {
    int fft_size = 0;   ///< N
    int block_size = 0; ///< M new samples per block
};

inline void validate(const OlaConfig& c) {
    if (c.fft_size < 1 || c.block_size < 1 || c.block_size > c.fft_size)
        throw config_error(
            "OlaConfig: need 1 <= block_size <= fft_size");
}

class OverlapSaveEngine {
  public:
    OverlapSaveEngine(const OlaConfig& cfg, const TapVector& taps) : cfg_(cfg) {
        validate(cfg);
        if (taps.taps.empty() ||
            static_cast<int>(taps.taps.size()) > cfg.fft_size)
            throw config_error(
                "OverlapSaveEngine: taps must hold between 1 and fft_size "
                "entries");
        cvector padded = taps.taps;
        padded.resize(static_cast<std::size_t>(cfg.fft_size),
                      complexd(0.0, 0.0));
        taps_dft_ = dft_forward(padded);
        reset();
    }

    /// Number of leading outputs that depend on the zero-seeded history.
    int warmup_length() const { return cfg_.fft_size - cfg_.block_size; }

    void reset() {
        history_.assign(static_cast<std::size_t>(warmup_length()),
                        complexd(0.0, 0.0));
    }

    /// Consumes exactly block_size samples, produces block_size outputs.
    cvector process_block(const cvector& block) {
        const std::size_t n = static_cast<std::size_t>(cfg_.fft_size);
        const std::size_t m = static_cast<std::size_t>(cfg_.block_size);
        if (block.size() != m)
            throw std::invalid_argument(
                "process_block: block must hold exactly block_size samples");

        cvector window(n);
        std::copy(history_.begin(), history_.end(), window.begin());
        std::copy(block.begin(), block.end(), window.begin() + (n - m));

        cvector spec = dft_forward(window);
        for (std::size_t i = 0; i < n; ++i) spec[i] *= taps_dft_[i];
        const cvector conv = dft_inverse(spec);

        std::copy(window.begin() + m, window.end(), history_.begin());
        return cvector(conv.begin() + (n - m), conv.end());
    }

    /// Filters a whole stream; x.size() must be a multiple of block_size
    /// (callers pad with zeros and truncate if needed).
    cvector filter(const cvector& x) {
        const std::size_t m = static_cast<std::size_t>(cfg_.block_size);
        if (x.size() % m != 0)
            throw std::invalid_argument(
                "filter: input length must be a multiple of block_size");
        cvector out;
        out.reserve(x.size());
        for (std::size_t pos = 0; pos < x.size(); pos += m) {
            const cvector block(x.begin() + pos, x.begin() + pos + m);
            const cvector y = process_block(block);
            out.insert(out.end(), y.begin(), y.end());
        }
        return out;
    }

  private:
    OlaConfig cfg_;
    cvector taps_dft_;
    cvector history_;
};

/// One-shot convenience wrapper around OverlapSaveEngine::filter.
inline cvector ola_filter_stream(const OlaConfig& cfg, const TapVector& taps,
                                 const cvector& x) {
    OverlapSaveEngine engine(cfg, taps);
    return engine.filter(x);
}

}  // namespace cdc
