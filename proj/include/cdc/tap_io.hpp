#pragma once

// Filter tap artifacts. Two formats:
//
//   * JSON interchange, schema
//       { "method": string, "N": int, "M": int, "L": int,
//         "omega": number, "K": number,
//         "taps": [ {"re": number, "im": number}, ... ] }
//     N/M describe the overlap-save geometry the taps were designed for
//     (0 when not tied to one), L the designed filter length; the tap
//     carrying lag zero sits at index (L-1)/2. Numbers are written with
//     shortest round-trip precision, so load(save(x)) is bit-exact.
//
//   * CSV export "index,re,im", one row per tap, for external plotting.
//     This direction is export-only; the JSON file is the one read back.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cdc/design.hpp"
#include "cdc/errors.hpp"
#include "cdc/types.hpp"

namespace cdc {

/// A designed tap vector plus the metadata needed to reproduce or apply it.
struct TapRecord {
    std::string method;
    int fft_size = 0;      ///< N, 0 when not designed for a specific engine
    int block_size = 0;    ///< M, 0 when not designed for a specific engine
    int filter_length = 0; ///< L, odd
    double omega = full_band;
    double k = 0.0;
    TapVector taps;
};

inline nlohmann::ordered_json tap_to_json(const TapRecord& rec) {
    nlohmann::ordered_json j;
    j["method"] = rec.method;
    j["N"] = rec.fft_size;
    j["M"] = rec.block_size;
    j["L"] = rec.filter_length;
    j["omega"] = rec.omega;
    j["K"] = rec.k;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const complexd& t : rec.taps.taps)
        arr.push_back({{"re", t.real()}, {"im", t.imag()}});
    j["taps"] = std::move(arr);
    return j;
}

inline TapRecord tap_from_json(const nlohmann::ordered_json& j) {
    std::string problems;
    const auto complain = [&problems](const std::string& p) {
        problems += "\n  " + p;
    };

    TapRecord rec;
    if (!j.is_object()) {
        throw io_error("tap file: top level must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "method" && key != "N" && key != "M" && key != "L" &&
            key != "omega" && key != "K" && key != "taps")
            complain("unknown field '" + key + "'");
    }

    const auto need = [&](const char* name) -> const nlohmann::ordered_json* {
        if (!j.contains(name)) {
            complain(std::string("missing field '") + name + "'");
            return nullptr;
        }
        return &j.at(name);
    };
    const auto get_int = [&](const char* name, int& out) {
        if (const auto* v = need(name)) {
            if (!v->is_number_integer())
                complain(std::string("'") + name + "' must be an integer");
            else
                out = v->get<int>();
        }
    };
    const auto get_num = [&](const char* name, double& out) {
        if (const auto* v = need(name)) {
            if (!v->is_number())
                complain(std::string("'") + name + "' must be a number");
            else
                out = v->get<double>();
        }
    };

    if (const auto* v = need("method")) {
        if (!v->is_string())
            complain("'method' must be a string");
        else
            rec.method = v->get<std::string>();
    }
    get_int("N", rec.fft_size);
    get_int("M", rec.block_size);
    get_int("L", rec.filter_length);
    get_num("omega", rec.omega);
    get_num("K", rec.k);

    if (const auto* v = need("taps")) {
        if (!v->is_array() || v->empty()) {
            complain("'taps' must be a non-empty array");
        } else {
            rec.taps.taps.reserve(v->size());
            for (std::size_t i = 0; i < v->size(); ++i) {
                const auto& e = (*v)[i];
                if (!e.is_object() || !e.contains("re") || !e.contains("im") ||
                    !e.at("re").is_number() || !e.at("im").is_number()) {
                    complain("taps[" + std::to_string(i) +
                             "] must be an object {re, im} of numbers");
                    break;
                }
                rec.taps.taps.emplace_back(e.at("re").get<double>(),
                                           e.at("im").get<double>());
            }
        }
    }

    if (problems.empty()) {
        if (rec.filter_length < 1 || rec.filter_length % 2 == 0)
            complain("'L' must be odd and >= 1");
        else if (static_cast<std::size_t>(rec.filter_length) >
                 rec.taps.taps.size())
            complain("'L' exceeds the number of taps");
        if (rec.fft_size < 0 || rec.block_size < 0)
            complain("'N' and 'M' must be >= 0");
    }
    if (!problems.empty()) throw io_error("tap file:" + problems);

    rec.taps.center = (rec.filter_length - 1) / 2;
    return rec;
}

inline void write_tap_file(const std::string& path, const TapRecord& rec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << tap_to_json(rec).dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

inline TapRecord read_tap_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error("tap file " + path + ": " + e.what());
    }
    return tap_from_json(j);
}

inline void write_tap_csv(const std::string& path, const TapVector& taps) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << "index,re,im\n";
    char buf[96];
    for (std::size_t i = 0; i < taps.taps.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", i,
                      taps.taps[i].real(), taps.taps[i].imag());
        out << buf;
    }
    if (!out) throw io_error("write failed: " + path);
}

}  // namespace cdc
