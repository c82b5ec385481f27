#pragma once

// Quantity parsing for command-line flags and config values: a number with
// an optional unit suffix, normalized to SI. Suffix matching is
// case-insensitive and the suffix may be separated from the number by
// spaces, so "250km", "250 km" and "250KM" all parse to 2.5e5 m. A bare
// number is taken to already be in SI units for the quantity.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "cdc/errors.hpp"

namespace cdc {

namespace detail {

struct UnitScale {
    const char* suffix;
    double scale;
};

inline bool iequals(const std::string& a, const char* b) {
    std::size_t i = 0;
    for (; i < a.size() && b[i] != '\0'; ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return i == a.size() && b[i] == '\0';
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

template <std::size_t N>
double parse_quantity(const std::string& text, const char* what,
                      const UnitScale (&units)[N]) {
    const std::string s = trim(text);
    if (s.empty())
        throw config_error(std::string(what) + ": empty value");

    const char* begin = s.c_str();
    char* num_end = nullptr;
    const double value = std::strtod(begin, &num_end);
    if (num_end == begin)
        throw config_error(std::string(what) + ": cannot parse number in '" +
                           text + "'");

    const std::string suffix = trim(s.substr(
        static_cast<std::size_t>(num_end - begin)));
    if (suffix.empty()) return value;
    for (const UnitScale& u : units)
        if (iequals(suffix, u.suffix)) return value * u.scale;
    throw config_error(std::string(what) + ": unknown unit '" + suffix +
                       "' in '" + text + "'");
}

}  // namespace detail

/// Length in meters. Suffixes: nm, um, mm, m, km.
inline double parse_length(const std::string& text,
                           const char* what = "length") {
    static constexpr detail::UnitScale units[] = {
        {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}, {"km", 1e3}};
    return detail::parse_quantity(text, what, units);
}

/// Rate in 1/s. Accepts both frequency (Hz) and symbol-rate (Bd) suffix
/// families with k/M/G/T prefixes.
inline double parse_rate(const std::string& text, const char* what = "rate") {
    static constexpr detail::UnitScale units[] = {
        {"Hz", 1.0},  {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12},
        {"Bd", 1.0},  {"kBd", 1e3}, {"MBd", 1e6}, {"GBd", 1e9}, {"TBd", 1e12},
        {"baud", 1.0}};
    return detail::parse_quantity(text, what, units);
}

/// Fiber dispersion parameter in s/m^2. Suffix: ps/nm/km (also written
/// ps/(nm km) or ps/nm.km), the customary engineering unit.
inline double parse_dispersion_coeff(const std::string& text,
                                     const char* what = "dispersion") {
    static constexpr detail::UnitScale units[] = {{"ps/nm/km", 1e-6},
                                                  {"ps/(nm km)", 1e-6},
                                                  {"ps/(nm.km)", 1e-6},
                                                  {"ps/nm.km", 1e-6}};
    return detail::parse_quantity(text, what, units);
}

/// Dimensionless decibel figure; an optional "dB" suffix is allowed, and
/// "inf" is accepted (noise-free operation).
inline double parse_decibel(const std::string& text,
                            const char* what = "dB value") {
    static constexpr detail::UnitScale units[] = {{"dB", 1.0}};
    return detail::parse_quantity(text, what, units);
}

/// Oversampling ratio "p/q" (or a bare integer meaning p/1). Both parts
/// must be positive integers; further constraints (coprimality, p > q) are
/// the consumer's business.
inline std::pair<int, int> parse_ratio(const std::string& text,
                                       const char* what = "ratio") {
    const std::string s = detail::trim(text);
    const auto bad = [&] {
        return config_error(std::string(what) +
                            ": expected p or p/q with positive integers, got '" +
                            text + "'");
    };
    if (s.empty()) throw bad();

    const auto parse_int = [&](const std::string& part) {
        if (part.empty()) throw bad();
        for (char c : part)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw bad();
        const long v = std::strtol(part.c_str(), nullptr, 10);
        if (v < 1 || v > 1000000) throw bad();
        return static_cast<int>(v);
    };

    const std::size_t slash = s.find('/');
    if (slash == std::string::npos) return {parse_int(s), 1};
    return {parse_int(detail::trim(s.substr(0, slash))),
            parse_int(detail::trim(s.substr(slash + 1)))};
}

}  // namespace cdc
