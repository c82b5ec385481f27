#pragma once

// JSON forms of the simulation configuration and of run manifests.
//
// Config schema (version 1): every field optional, defaults apply; physical
// quantities accept either a plain SI number or a string with a unit suffix
// ("250km", "60GBd", "17ps/nm/km", "8dB"). Noise-free operation is spelled
// "inf" (JSON has no infinity literal, so it round-trips as that string).
//
//   { "schema_version": 1,
//     "baud_rate": 60e9,            "oversampling": "8/7" | {"p":8,"q":7},
//     "rrc_rolloff": 0.1,           "rrc_span": 32,
//     "fiber": { "dispersion": 1.7e-5, "wavelength": 1.55e-6, "length": 0 },
//     "snr_db": 8.0,                "num_bits": 400000,  "seed": 1,
//     "cdc": { "method": "proposed", "fft_size": 256, "block_size": 128,
//              "filter_length": 129, "realization": "overlap-save" } }
//
// The filter sampling period is always derived from baud_rate and the
// oversampling ratio, so it is not a config field. Type and schema problems
// are collected per field and reported together; value-level constraints are
// the job of validate(LinkConfig).
//
// A manifest records one tool invocation: the command, its fully resolved
// configuration, the seed, the files it wrote and how long it took.
// Re-executing a manifest reproduces those files byte for byte (the fresh
// manifest differs only in its duration field).

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cdc/errors.hpp"
#include "cdc/link.hpp"
#include "cdc/units.hpp"
#include "cdc/version.hpp"

namespace cdc {

inline constexpr int config_schema_version = 1;

inline nlohmann::ordered_json link_config_to_json(const LinkConfig& cfg) {
    nlohmann::ordered_json j;
    j["schema_version"] = config_schema_version;
    j["baud_rate"] = cfg.baud_rate;
    j["oversampling"] = {{"p", cfg.oversampling.p}, {"q", cfg.oversampling.q}};
    j["rrc_rolloff"] = cfg.rrc_rolloff;
    j["rrc_span"] = cfg.rrc_span;
    j["fiber"] = {{"dispersion", cfg.fiber.dispersion},
                  {"wavelength", cfg.fiber.wavelength},
                  {"length", cfg.fiber.length}};
    if (std::isinf(cfg.snr_db) && cfg.snr_db > 0)
        j["snr_db"] = "inf";
    else
        j["snr_db"] = cfg.snr_db;
    j["num_bits"] = cfg.num_bits;
    j["seed"] = cfg.seed;
    j["cdc"] = {{"method", method_name(cfg.cdc.method)},
                {"fft_size", cfg.cdc.fft_size},
                {"block_size", cfg.cdc.block_size},
                {"filter_length", cfg.cdc.filter_length},
                {"realization", realization_name(cfg.cdc.realization)}};
    return j;
}

namespace detail {

/// Collects per-field problems while picking values out of a JSON object.
struct FieldReader {
    const nlohmann::ordered_json& j;
    std::string prefix;
    std::string& problems;

    void complain(const std::string& field, const std::string& what) const {
        problems += "\n  " + prefix + field + ": " + what;
    }

    bool has(const char* name) const { return j.contains(name); }

    void check_known(std::initializer_list<const char*> known) const {
        for (const auto& [key, value] : j.items()) {
            (void)value;
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) complain(key, "unknown field");
        }
    }

    void get_int(const char* name, int& out) const {
        if (!j.contains(name)) return;
        const auto& v = j.at(name);
        if (!v.is_number_integer())
            complain(name, "must be an integer");
        else
            out = v.get<int>();
    }

    void get_u64(const char* name, std::uint64_t& out) const {
        if (!j.contains(name)) return;
        const auto& v = j.at(name);
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0))
            complain(name, "must be a non-negative integer");
        else
            out = v.get<std::uint64_t>();
    }

    void get_double(const char* name, double& out) const {
        if (!j.contains(name)) return;
        const auto& v = j.at(name);
        if (!v.is_number())
            complain(name, "must be a number");
        else
            out = v.get<double>();
    }

    /// Number in SI, or a string parsed with the given unit parser.
    template <typename Parser>
    void get_quantity(const char* name, double& out, Parser parse) const {
        if (!j.contains(name)) return;
        const auto& v = j.at(name);
        if (v.is_number()) {
            out = v.get<double>();
        } else if (v.is_string()) {
            try {
                out = parse(v.get<std::string>());
            } catch (const config_error& e) {
                complain(name, e.what());
            }
        } else {
            complain(name, "must be a number or a unit string");
        }
    }
};

}  // namespace detail

/// Applies the fields present in j on top of base. Shape and type problems
/// are gathered and thrown together as one config_error; value-level checks
/// remain with validate(LinkConfig).
inline LinkConfig link_config_from_json(const nlohmann::ordered_json& j,
                                        const LinkConfig& base = {}) {
    if (!j.is_object())
        throw config_error("config: top level must be a JSON object");
    LinkConfig cfg = base;
    std::string problems;
    detail::FieldReader top{j, "", problems};
    top.check_known({"schema_version", "baud_rate", "oversampling",
                     "rrc_rolloff", "rrc_span", "fiber", "snr_db", "num_bits",
                     "seed", "cdc"});

    if (top.has("schema_version")) {
        int ver = config_schema_version;
        top.get_int("schema_version", ver);
        if (ver != config_schema_version)
            top.complain("schema_version",
                         "unsupported (this tool reads version " +
                             std::to_string(config_schema_version) + ")");
    }

    top.get_quantity("baud_rate", cfg.baud_rate,
                     [](const std::string& s) { return parse_rate(s, "baud_rate"); });

    if (top.has("oversampling")) {
        const auto& v = j.at("oversampling");
        if (v.is_string()) {
            try {
                const auto [p, q] = parse_ratio(v.get<std::string>(), "oversampling");
                cfg.oversampling.p = p;
                cfg.oversampling.q = q;
            } catch (const config_error& e) {
                top.complain("oversampling", e.what());
            }
        } else if (v.is_object()) {
            detail::FieldReader os{v, "oversampling.", problems};
            os.check_known({"p", "q"});
            os.get_int("p", cfg.oversampling.p);
            os.get_int("q", cfg.oversampling.q);
        } else {
            top.complain("oversampling", "must be \"p/q\" or an object {p, q}");
        }
    }

    top.get_double("rrc_rolloff", cfg.rrc_rolloff);
    top.get_int("rrc_span", cfg.rrc_span);

    if (top.has("fiber")) {
        const auto& v = j.at("fiber");
        if (!v.is_object()) {
            top.complain("fiber", "must be an object");
        } else {
            detail::FieldReader fib{v, "fiber.", problems};
            fib.check_known({"dispersion", "wavelength", "length"});
            fib.get_quantity("dispersion", cfg.fiber.dispersion,
                             [](const std::string& s) {
                                 return parse_dispersion_coeff(s, "dispersion");
                             });
            fib.get_quantity("wavelength", cfg.fiber.wavelength,
                             [](const std::string& s) {
                                 return parse_length(s, "wavelength");
                             });
            fib.get_quantity("length", cfg.fiber.length,
                             [](const std::string& s) {
                                 return parse_length(s, "length");
                             });
        }
    }

    top.get_quantity("snr_db", cfg.snr_db, [](const std::string& s) {
        return parse_decibel(s, "snr_db");
    });
    top.get_u64("num_bits", cfg.num_bits);
    top.get_u64("seed", cfg.seed);

    if (top.has("cdc")) {
        const auto& v = j.at("cdc");
        if (!v.is_object()) {
            top.complain("cdc", "must be an object");
        } else {
            detail::FieldReader eq{v, "cdc.", problems};
            eq.check_known({"method", "fft_size", "block_size",
                            "filter_length", "realization"});
            if (eq.has("method")) {
                const auto& m = v.at("method");
                if (!m.is_string() ||
                    !parse_method(m.get<std::string>(), cfg.cdc.method))
                    eq.complain("method",
                                "must be one of none, exact-inverse, "
                                "time-domain, proposed");
            }
            eq.get_int("fft_size", cfg.cdc.fft_size);
            eq.get_int("block_size", cfg.cdc.block_size);
            eq.get_int("filter_length", cfg.cdc.filter_length);
            if (eq.has("realization")) {
                const auto& r = v.at("realization");
                if (!r.is_string() ||
                    !parse_realization(r.get<std::string>(),
                                       cfg.cdc.realization))
                    eq.complain("realization",
                                "must be direct or overlap-save");
            }
        }
    }

    if (!problems.empty()) throw config_error("config:" + problems);
    return cfg;
}

/// Record of one tool invocation and the artifacts it produced.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config;  ///< fully resolved, command-specific
    std::uint64_t seed = 0;         ///< 0 for commands without randomness
    std::vector<std::string> outputs;
    double duration_seconds = 0.0;
};

inline nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool"] = "cdcfir";
    j["tool_version"] = version_string;
    j["schema_version"] = config_schema_version;
    j["command"] = m.command;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["outputs"] = m.outputs;
    j["duration_seconds"] = m.duration_seconds;
    return j;
}

inline RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object())
        throw config_error("manifest: top level must be a JSON object");
    std::string problems;
    detail::FieldReader top{j, "", problems};
    top.check_known({"tool", "tool_version", "schema_version", "command",
                     "config", "seed", "outputs", "duration_seconds"});

    RunManifest m;
    for (const char* req : {"command", "config", "outputs"})
        if (!top.has(req))
            top.complain(req, "missing required field");
    if (top.has("command")) {
        const auto& v = j.at("command");
        if (!v.is_string())
            top.complain("command", "must be a string");
        else
            m.command = v.get<std::string>();
    }
    if (top.has("config")) m.config = j.at("config");
    top.get_u64("seed", m.seed);
    top.get_double("duration_seconds", m.duration_seconds);
    if (top.has("outputs")) {
        const auto& v = j.at("outputs");
        if (!v.is_array()) {
            top.complain("outputs", "must be an array of paths");
        } else {
            for (const auto& e : v) {
                if (!e.is_string()) {
                    top.complain("outputs", "must be an array of strings");
                    break;
                }
                m.outputs.push_back(e.get<std::string>());
            }
        }
    }
    if (top.has("schema_version")) {
        int ver = config_schema_version;
        top.get_int("schema_version", ver);
        if (ver != config_schema_version)
            top.complain("schema_version", "unsupported");
    }
    if (!problems.empty()) throw config_error("manifest:" + problems);
    return m;
}

inline void write_json_file(const std::string& path,
                            const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

inline nlohmann::ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open: " + path);
    try {
        return nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw io_error(path + ": " + e.what());
    }
}

}  // namespace cdc
