// Command-line front end: inspect dispersion parameters, design compensation
// filters, run single link simulations and parameter sweeps. Artifacts are
// JSON/CSV files, each accompanied by a manifest that records the command,
// the fully resolved configuration, the seed, the output paths and the
// wall-clock duration; re-executing a manifest (--replay) reproduces the
// artifacts byte for byte.
//
// Exit codes: 0 success, 2 usage, 3 invalid configuration, 4 numerical or
// simulation failure, 5 file I/O failure, 1 unexpected.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cdc/config_json.hpp"
#include "cdc/design.hpp"
#include "cdc/dispersion.hpp"
#include "cdc/errors.hpp"
#include "cdc/link.hpp"
#include "cdc/tap_io.hpp"
#include "cdc/units.hpp"
#include "cdc/version.hpp"

namespace {

/// Bad values passed on the command line (as opposed to a bad config file).
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

/// Reinterprets unit-parse failures of flag values as usage errors.
template <typename F>
auto flag_value(F&& parse) {
    try {
        return parse();
    } catch (const cdc::config_error& e) {
        throw usage_error(e.what());
    }
}

/// Relative output basenames land in $CDC_OUT_DIR when it is set.
std::string resolve_out(const std::string& base) {
    const std::filesystem::path p(base);
    if (p.is_absolute()) return base;
    if (const char* dir = std::getenv("CDC_OUT_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / p).string();
    return base;
}

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

// Shared system/fiber flags. Values stay strings until after parsing so the
// unit suffixes are interpreted in one place.
struct SystemFlags {
    std::string dispersion = "17ps/nm/km";
    std::string wavelength = "1550nm";
    std::string baud = "60GBd";
    std::string rate = "8/7";

    void add_to(CLI::App* cmd) {
        cmd->add_option("--dispersion", dispersion,
                        "fiber dispersion D (e.g. 17ps/nm/km)");
        cmd->add_option("--wavelength", wavelength,
                        "carrier wavelength (e.g. 1550nm)");
        cmd->add_option("--baud", baud, "symbol rate (e.g. 60GBd)");
        cmd->add_option("--rate", rate, "oversampling ratio p/q (e.g. 8/7)");
    }

    /// Fiber parameters with the sampling period implied by baud and p/q.
    cdc::FiberParams fiber(double length_m) const {
        return flag_value([&] {
            const double baud_hz = cdc::parse_rate(baud, "--baud");
            const auto [p, q] = cdc::parse_ratio(rate, "--rate");
            if (!(baud_hz > 0.0))
                throw cdc::config_error("--baud: must be positive");
            cdc::FiberParams f;
            f.dispersion = cdc::parse_dispersion_coeff(dispersion, "--dispersion");
            f.wavelength = cdc::parse_length(wavelength, "--wavelength");
            f.length = length_m;
            f.sample_period = static_cast<double>(q) / (p * baud_hz);
            return f;
        });
    }
};

// ---------------------------------------------------------------------------
// info

void cmd_info(const SystemFlags& sys, const std::string& z_text,
              std::optional<int> taps_flag) {
    const double z = flag_value([&] { return cdc::parse_length(z_text, "-z"); });
    const cdc::FiberParams fiber = sys.fiber(z);
    cdc::validate(fiber);

    const cdc::DispersionK k = cdc::dispersion_constant(fiber);
    const int l_est = cdc::estimate_length(k);
    const int l_report = taps_flag.value_or(l_est);

    std::printf("system      %s, oversampling %s (T = %.6g ps)\n",
                sys.baud.c_str(), sys.rate.c_str(),
                fiber.sample_period * 1e12);
    std::printf("fiber       D = %s, wavelength %s, z = %.6g km\n",
                sys.dispersion.c_str(), sys.wavelength.c_str(), z / 1e3);
    std::printf("dispersion constant K = %.6g\n", k.value);
    std::printf("estimated filter length L = %d\n", l_est);
    const double z_max = cdc::max_fiber_length(l_report, fiber);
    std::printf("L = %d serves fiber lengths up to %.6g km\n", l_report,
                z_max / 1e3);
}

// ---------------------------------------------------------------------------
// design

struct DesignRequest {
    std::string method;  // "time-domain" or "proposed"
    int fft_size = 0;    // N (0 when not tied to an engine)
    int block_size = 0;  // M
    int filter_length = 0;
    double omega = cdc::full_band;
    double k = 0.0;
    bool compare = false;
};

nlohmann::ordered_json design_request_to_json(const DesignRequest& r) {
    return {{"method", r.method},   {"N", r.fft_size}, {"M", r.block_size},
            {"L", r.filter_length}, {"omega", r.omega}, {"K", r.k},
            {"compare", r.compare}};
}

DesignRequest design_request_from_json(const nlohmann::ordered_json& j) {
    DesignRequest r;
    try {
        r.method = j.at("method").get<std::string>();
        r.fft_size = j.at("N").get<int>();
        r.block_size = j.at("M").get<int>();
        r.filter_length = j.at("L").get<int>();
        r.omega = j.at("omega").get<double>();
        r.k = j.at("K").get<double>();
        r.compare = j.at("compare").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw cdc::config_error(std::string("design manifest config: ") +
                                e.what());
    }
    return r;
}

/// Validates a design request and produces its taps. Returns the record to
/// be written; on --compare also fills in both quadrature errors.
cdc::TapRecord execute_design(const DesignRequest& req,
                              std::optional<std::pair<double, double>>* errors) {
    if (req.method != "time-domain" && req.method != "proposed")
        throw cdc::config_error(
            "design method must be time-domain or proposed");
    if (!(req.k >= 0.0) || !std::isfinite(req.k))
        throw cdc::config_error("K must be finite and >= 0");

    cdc::TapRecord rec;
    rec.method = req.method;
    rec.fft_size = req.fft_size;
    rec.block_size = req.block_size;
    rec.omega = req.omega;
    rec.k = req.k;

    const bool has_engine = req.fft_size > 0 || req.block_size > 0;
    cdc::DesignSpec spec;
    if (has_engine || req.method == "proposed")
        spec = cdc::make_design_spec(req.fft_size, req.block_size, req.omega);

    if (req.method == "proposed") {
        rec.filter_length = spec.filter_length;
        if (req.filter_length && req.filter_length != spec.filter_length)
            throw cdc::config_error(
                "the joint design's -L is fixed to N - M + 1; omit it or "
                "match");
    } else {
        rec.filter_length = req.filter_length ? req.filter_length : 1;
        if (rec.filter_length < 1 || rec.filter_length % 2 == 0)
            throw cdc::config_error("-L must be odd and >= 1");
        if (has_engine && rec.filter_length > spec.filter_length)
            throw cdc::config_error(
                "time-domain taps need zero padding inside the engine: "
                "L <= N - M + 1");
    }

    if (req.k == 0.0) {
        // No dispersion: the identity filter, as a centered single tap (or a
        // pure delay when an explicit longer L was requested).
        rec.taps = cdc::identity_taps(req.method == "time-domain"
                                          ? rec.filter_length
                                          : 1);
        rec.filter_length = static_cast<int>(rec.taps.taps.size());
    } else if (req.method == "proposed") {
        rec.taps = cdc::overlap_save_design(spec, cdc::DispersionK{req.k});
    } else {
        rec.taps = cdc::time_domain_design(rec.filter_length,
                                           cdc::DispersionK{req.k}, req.omega);
    }

    if (req.compare) {
        if (!has_engine)
            throw cdc::config_error("--compare needs the -N/-M geometry");
        if (!(req.k > 0.0))
            throw cdc::config_error("--compare needs K > 0");
        const cdc::TapVector td = cdc::time_domain_design(
            req.method == "time-domain" ? rec.filter_length
                                        : spec.filter_length,
            cdc::DispersionK{req.k}, req.omega);
        const cdc::TapVector prop =
            cdc::overlap_save_design(spec, cdc::DispersionK{req.k});
        const double err_td =
            cdc::total_ls_error(td, spec, cdc::DispersionK{req.k});
        const double err_prop =
            cdc::total_ls_error(prop, spec, cdc::DispersionK{req.k});
        *errors = std::make_pair(err_td, err_prop);
    }
    return rec;
}

void cmd_design(const DesignRequest& req, const std::string& out_base,
                const std::string& manifest_path_override = {}) {
    const Stopwatch timer;
    std::optional<std::pair<double, double>> errors;
    const cdc::TapRecord rec = execute_design(req, &errors);

    const std::string base = resolve_out(out_base);
    const std::string json_path = base + ".json";
    const std::string csv_path = base + ".csv";
    cdc::write_tap_file(json_path, rec);
    cdc::write_tap_csv(csv_path, rec.taps);

    std::printf("designed %s taps: %zu entries, L = %d, K = %.6g\n",
                rec.method.c_str(), rec.taps.taps.size(), rec.filter_length,
                rec.k);
    cdc::RunManifest manifest;
    manifest.command = "design";
    manifest.config = design_request_to_json(req);
    manifest.outputs = {json_path, csv_path};
    if (errors) {
        std::printf("total LS error  time-domain: %.12e\n", errors->first);
        std::printf("total LS error  proposed:    %.12e\n", errors->second);
        manifest.config["comparison"] = {{"time-domain", errors->first},
                                         {"proposed", errors->second}};
    }
    manifest.duration_seconds = timer.seconds();
    const std::string manifest_path = manifest_path_override.empty()
                                          ? base + ".manifest.json"
                                          : manifest_path_override;
    cdc::write_json_file(manifest_path, cdc::manifest_to_json(manifest));
    std::printf("wrote %s, %s, %s\n", json_path.c_str(), csv_path.c_str(),
                manifest_path.c_str());
}

// ---------------------------------------------------------------------------
// simulate / sweep

/// Flags shared by simulate and sweep that override the config file.
struct LinkFlags {
    SystemFlags sys;
    std::string config_path;
    std::string z_text, snr_text, method_text, realization_text;
    std::uint64_t bits = 0, seed = 0;
    int fft_size = 0, block_size = 0, filter_length = 0, span = 0;
    double rolloff = 0.0;
    CLI::App* cmd = nullptr;

    void add_to(CLI::App* c) {
        cmd = c;
        c->add_option("--config", config_path,
                      "JSON config file (flags override it)");
        sys.add_to(c);
        c->add_option("-z,--length", z_text, "fiber length (e.g. 250km)");
        c->add_option("--snr", snr_text, "Eb/N0 at the decision point in dB; inf disables noise");
        c->add_option("--bits", bits, "number of payload bits");
        c->add_option("--seed", seed, "RNG seed");
        c->add_option("--method", method_text,
                      "none, exact-inverse, time-domain or proposed");
        c->add_option("-N,--fft-size", fft_size, "overlap-save DFT size");
        c->add_option("-M,--block-size", block_size,
                      "new samples per overlap-save block");
        c->add_option("-L,--filter-length", filter_length,
                      "time-domain filter length (odd)");
        c->add_option("--realization", realization_text,
                      "direct or overlap-save");
        c->add_option("--rolloff", rolloff, "RRC roll-off in (0, 1]");
        c->add_option("--span", span, "RRC span in symbols (even)");
    }

    cdc::LinkConfig resolve() const {
        cdc::LinkConfig cfg;
        if (!config_path.empty())
            cfg = cdc::link_config_from_json(
                cdc::read_json_file(config_path), cfg);

        const auto given = [this](const char* name) {
            return cmd->count(name) > 0;
        };
        return flag_value([&] {
            if (given("--baud"))
                cfg.baud_rate = cdc::parse_rate(sys.baud, "--baud");
            if (given("--rate")) {
                const auto [p, q] = cdc::parse_ratio(sys.rate, "--rate");
                cfg.oversampling = {p, q};
            }
            if (given("--dispersion"))
                cfg.fiber.dispersion =
                    cdc::parse_dispersion_coeff(sys.dispersion, "--dispersion");
            if (given("--wavelength"))
                cfg.fiber.wavelength =
                    cdc::parse_length(sys.wavelength, "--wavelength");
            if (given("-z"))
                cfg.fiber.length = cdc::parse_length(z_text, "-z");
            if (given("--snr"))
                cfg.snr_db = cdc::parse_decibel(snr_text, "--snr");
            if (given("--bits")) cfg.num_bits = bits;
            if (given("--seed")) cfg.seed = seed;
            if (given("--method") &&
                !cdc::parse_method(method_text, cfg.cdc.method))
                throw cdc::config_error(
                    "--method: must be none, exact-inverse, time-domain or "
                    "proposed");
            if (given("-N")) cfg.cdc.fft_size = fft_size;
            if (given("-M")) cfg.cdc.block_size = block_size;
            if (given("-L")) cfg.cdc.filter_length = filter_length;
            if (given("--realization") &&
                !cdc::parse_realization(realization_text,
                                        cfg.cdc.realization))
                throw cdc::config_error(
                    "--realization: must be direct or overlap-save");
            if (given("--rolloff")) cfg.rrc_rolloff = rolloff;
            if (given("--span")) cfg.rrc_span = span;
            return cfg;
        });
    }
};

void print_point(const cdc::LinkConfig& cfg, const cdc::BerPoint& r) {
    const cdc::CdcGeometry geo = cdc::resolve_geometry(cfg.cdc);
    std::printf("method    %s (%s, N=%d, M=%d, L=%d)\n",
                cdc::method_name(cfg.cdc.method),
                cdc::realization_name(cfg.cdc.realization), geo.fft_size,
                geo.block_size, geo.filter_length);
    std::printf("fiber     %.6g km\n", cfg.fiber.length / 1e3);
    if (std::isinf(cfg.snr_db))
        std::printf("Eb/N0     inf (noise free)\n");
    else
        std::printf("Eb/N0     %.6g dB\n", cfg.snr_db);
    std::printf("bits      %llu\n",
                static_cast<unsigned long long>(r.bits_total));
    std::printf("errors    %llu\n",
                static_cast<unsigned long long>(r.bits_error));
    std::printf("BER       %.6e  (95%% CI +- %.2e)\n", r.ber,
                r.ci95_halfwidth);
}

void cmd_simulate(const cdc::LinkConfig& cfg, const std::string& out_base,
                  const std::string& manifest_path_override = {}) {
    const Stopwatch timer;
    cdc::validate(cfg);
    const cdc::BerPoint r = cdc::run_link(cfg);
    print_point(cfg, r);

    if (out_base.empty()) return;
    const std::string base = resolve_out(out_base);
    const std::string result_path = base + ".json";
    cdc::write_json_file(result_path,
                         nlohmann::ordered_json{{"bits", r.bits_total},
                                                {"errors", r.bits_error},
                                                {"ber", r.ber},
                                                {"ci95", r.ci95_halfwidth}});

    cdc::RunManifest manifest;
    manifest.command = "simulate";
    manifest.config = cdc::link_config_to_json(cfg);
    manifest.seed = cfg.seed;
    manifest.outputs = {result_path};
    manifest.duration_seconds = timer.seconds();
    const std::string manifest_path = manifest_path_override.empty()
                                          ? base + ".manifest.json"
                                          : manifest_path_override;
    cdc::write_json_file(manifest_path, cdc::manifest_to_json(manifest));
    std::printf("wrote %s, %s\n", result_path.c_str(), manifest_path.c_str());
}

std::vector<double> parse_values_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string part = text.substr(pos, comma - pos);
        const char* begin = part.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            throw usage_error("--values: cannot parse '" + part + "'");
        values.push_back(v);
        pos = comma + 1;
    }
    if (values.empty()) throw usage_error("--values: empty list");
    return values;
}

void cmd_sweep(const cdc::LinkConfig& base_cfg, cdc::SweepAxis axis,
               const std::vector<double>& values, int jobs,
               const std::string& out_base,
               const std::string& manifest_path_override = {}) {
    const Stopwatch timer;
    cdc::validate(base_cfg);
    if (jobs < 1) throw usage_error("--jobs must be >= 1");

    const std::vector<cdc::SweepPoint> points =
        cdc::ber_sweep(base_cfg, axis, values, jobs);

    for (const cdc::SweepPoint& pt : points) {
        if (!pt.error.empty())
            std::printf("%s=%-8.6g  failed: %s\n", cdc::axis_name(axis),
                        pt.axis_value, pt.error.c_str());
        else
            std::printf("%s=%-8.6g  BER %.6e  (+- %.2e, %llu errors)\n",
                        cdc::axis_name(axis), pt.axis_value, pt.result.ber,
                        pt.result.ci95_halfwidth,
                        static_cast<unsigned long long>(pt.result.bits_error));
    }

    const std::string base = resolve_out(out_base);
    const std::string csv_path = base + ".csv";
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw cdc::io_error("cannot open for writing: " + csv_path);
        cdc::write_sweep_csv(out, points);
        if (!out) throw cdc::io_error("write failed: " + csv_path);
    }

    cdc::RunManifest manifest;
    manifest.command = "sweep";
    manifest.config = {{"base", cdc::link_config_to_json(base_cfg)},
                       {"axis", cdc::axis_name(axis)},
                       {"values", values},
                       {"jobs", jobs}};
    manifest.seed = base_cfg.seed;
    manifest.outputs = {csv_path};
    manifest.duration_seconds = timer.seconds();
    const std::string manifest_path = manifest_path_override.empty()
                                          ? base + ".manifest.json"
                                          : manifest_path_override;
    cdc::write_json_file(manifest_path, cdc::manifest_to_json(manifest));
    std::printf("wrote %s, %s\n", csv_path.c_str(), manifest_path.c_str());
}

// ---------------------------------------------------------------------------
// replay

/// Strips a known artifact suffix so outputs recorded in a manifest can be
/// re-derived as basename + suffix.
std::string strip_suffix(const std::string& path, const std::string& suffix) {
    if (path.size() >= suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size());
    throw cdc::config_error("manifest output '" + path +
                            "' does not end in " + suffix);
}

void cmd_replay(const std::string& manifest_path) {
    const cdc::RunManifest m =
        cdc::manifest_from_json(cdc::read_json_file(manifest_path));
    if (m.outputs.empty())
        throw cdc::config_error("manifest lists no outputs to reproduce");

    if (m.command == "design") {
        nlohmann::ordered_json cfg = m.config;
        cfg.erase("comparison");
        cmd_design(design_request_from_json(cfg),
                   strip_suffix(m.outputs.at(0), ".json"), manifest_path);
    } else if (m.command == "simulate") {
        cmd_simulate(cdc::link_config_from_json(m.config),
                     strip_suffix(m.outputs.at(0), ".json"), manifest_path);
    } else if (m.command == "sweep") {
        try {
            const cdc::LinkConfig base =
                cdc::link_config_from_json(m.config.at("base"));
            cdc::SweepAxis axis;
            if (!cdc::parse_axis(m.config.at("axis").get<std::string>(), axis))
                throw cdc::config_error("manifest: unknown sweep axis");
            const std::vector<double> values =
                m.config.at("values").get<std::vector<double>>();
            const int jobs = m.config.at("jobs").get<int>();
            cmd_sweep(base, axis, values, jobs,
                      strip_suffix(m.outputs.at(0), ".csv"), manifest_path);
        } catch (const nlohmann::json::exception& e) {
            throw cdc::config_error(std::string("sweep manifest config: ") +
                                    e.what());
        }
    } else {
        throw cdc::config_error("manifest command '" + m.command +
                                "' is not replayable");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chromatic-dispersion compensation filters and link simulation"};
    app.set_version_flag("--version",
                         std::string("cdcfir ") + cdc::version_string);
    app.require_subcommand(0, 1);

    std::string replay_path;
    app.add_option("--replay", replay_path,
                   "re-execute a manifest, reproducing its outputs");

    // info
    SystemFlags info_sys;
    std::string info_z = "0";
    int info_taps = 0;
    CLI::App* info =
        app.add_subcommand("info", "report K, the estimated filter length "
                                   "and the fiber length a filter serves");
    info_sys.add_to(info);
    info->add_option("-z,--length", info_z, "fiber length (e.g. 250km)");
    CLI::Option* info_taps_opt = info->add_option(
        "-L,--filter-length", info_taps,
        "report the max fiber length this odd filter length serves");

    // design
    SystemFlags design_sys;
    std::string design_method, design_z = "0", design_out = "taps";
    int design_n = 0, design_m = 0, design_l = 0;
    double design_k_flag = 0.0, design_omega = 1.0;
    bool design_compare = false;
    CLI::App* design =
        app.add_subcommand("design", "design compensation filter taps and "
                                     "write them as JSON + CSV");
    design_sys.add_to(design);
    design->add_option("--method", design_method,
                       "time-domain or proposed")->required();
    design->add_option("-N,--fft-size", design_n, "overlap-save DFT size");
    design->add_option("-M,--block-size", design_m,
                       "new samples per overlap-save block");
    design->add_option("-L,--filter-length", design_l,
                       "time-domain filter length (odd)");
    design->add_option("-z,--length", design_z, "fiber length (e.g. 250km)");
    CLI::Option* design_k_opt =
        design->add_option("--k", design_k_flag,
                           "dispersion constant K directly (overrides -z)");
    design->add_option("--omega", design_omega,
                       "design band edge as a fraction of Nyquist, in (0, 1]");
    design->add_flag("--compare", design_compare,
                     "also report the total LS error of both methods");
    design->add_option("-o,--output", design_out,
                       "output basename (writes .json, .csv, .manifest.json)");

    // simulate
    LinkFlags sim_flags;
    std::string sim_out;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "run one link simulation and report the BER");
    sim_flags.add_to(simulate);
    simulate->add_option("-o,--output", sim_out,
                         "output basename (writes .json, .manifest.json)");

    // sweep
    LinkFlags sweep_flags;
    std::string sweep_axis_text, sweep_values_text, sweep_out = "sweep";
    int sweep_jobs = 1;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "run a BER sweep along one axis and write a CSV");
    sweep_flags.add_to(sweep);
    sweep->add_option("--axis", sweep_axis_text,
                      "length_km, snr_db or fft_size")->required();
    sweep->add_option("--values", sweep_values_text,
                      "comma-separated axis values")->required();
    sweep->add_option("--jobs", sweep_jobs, "max concurrent points");
    sweep->add_option("-o,--output", sweep_out,
                      "output basename (writes .csv, .manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!replay_path.empty()) {
            if (!app.get_subcommands().empty())
                throw usage_error("--replay takes no subcommand");
            cmd_replay(replay_path);
            return 0;
        }

        if (info->parsed()) {
            cmd_info(info_sys, info_z,
                     info_taps_opt->count() ? std::optional<int>(info_taps)
                                            : std::nullopt);
        } else if (design->parsed()) {
            DesignRequest req;
            req.method = design_method;
            req.fft_size = design_n;
            req.block_size = design_m;
            req.filter_length = design_l;
            if (!(design_omega > 0.0) || design_omega > 1.0)
                throw usage_error("--omega must be in (0, 1]");
            req.omega = design_omega * std::numbers::pi;
            req.compare = design_compare;
            if (design_k_opt->count()) {
                req.k = design_k_flag;
            } else {
                const double z = flag_value(
                    [&] { return cdc::parse_length(design_z, "-z"); });
                req.k = cdc::dispersion_constant(design_sys.fiber(z)).value;
            }
            cmd_design(req, design_out);
        } else if (simulate->parsed()) {
            cmd_simulate(sim_flags.resolve(), sim_out);
        } else if (sweep->parsed()) {
            cdc::SweepAxis axis;
            if (!cdc::parse_axis(sweep_axis_text, axis))
                throw usage_error(
                    "--axis: must be length_km, snr_db or fft_size");
            cmd_sweep(sweep_flags.resolve(), axis,
                      parse_values_list(sweep_values_text), sweep_jobs,
                      sweep_out);
        } else {
            std::fprintf(stderr,
                         "a subcommand is required: info, design, simulate "
                         "or sweep (see --help)\n");
            return 2;
        }
        return 0;
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const cdc::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const cdc::solver_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const cdc::link_error& e) {
        std::fprintf(stderr, "simulation failure: %s\n", e.what());
        return 4;
    } catch (const cdc::io_error& e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 1;
    }
}
