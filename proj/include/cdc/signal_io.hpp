#pragma once

// Flat binary container for complex sample streams:
//   bytes 0..7   magic "CDCSIG01"
//   bytes 8..15  sample count, uint64 little endian
//   then count * 2 float64 little endian, interleaved re, im.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "cdc/errors.hpp"
#include "cdc/types.hpp"

namespace cdc {

static_assert(std::endian::native == std::endian::little,
              "signal files are written in native byte order and the format "
              "is defined little endian");

inline constexpr char signal_magic[8] = {'C', 'D', 'C', 'S',
                                         'I', 'G', '0', '1'};

inline void write_signal(const std::string& path, const cvector& x) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_signal: cannot open " + path);
    out.write(signal_magic, sizeof(signal_magic));
    const std::uint64_t count = x.size();
    out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    for (const complexd& v : x) {
        const double re = v.real();
        const double im = v.imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
    if (!out) throw io_error("write_signal: write failed for " + path);
}

inline cvector read_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_signal: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, signal_magic, sizeof(magic)) != 0)
        throw io_error("read_signal: " + path + " is not a signal file");
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in) throw io_error("read_signal: truncated header in " + path);
    cvector x;
    x.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(re));
        in.read(reinterpret_cast<char*>(&im), sizeof(im));
        if (!in)
            throw io_error("read_signal: truncated sample data in " + path);
        x.emplace_back(re, im);
    }
    return x;
}

}  // namespace cdc
