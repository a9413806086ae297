// Copyright 2026 The wcpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through the C API.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wcpi/wcpi.h"

namespace {

enum ExitCode { kExitOk = 0, kExitInvalid = 2, kExitIo = 3, kExitInternal = 4 };

/// Carries a status out of a command body.
struct Failure {
    wcpi_status status;
    std::string message;
};

int exit_code(wcpi_status status) {
    switch (status) {
        case WCPI_OK:
            return kExitOk;
        case WCPI_ERR_IO:
            return kExitIo;
        case WCPI_ERR_INTERNAL:
            return kExitInternal;
        default:
            return kExitInvalid;
    }
}

void check(wcpi_status status) {
    if (status != WCPI_OK) {
        throw Failure{status, wcpi_last_error()};
    }
}

[[noreturn]] void invalid(const std::string &message) {
    throw Failure{WCPI_ERR_CONFIG, message};
}

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ScenarioDeleter {
    void operator()(wcpi_scenario *s) const {
        wcpi_scenario_free(s);
    }
};
struct ScanDeleter {
    void operator()(wcpi_scan *s) const {
        wcpi_scan_free(s);
    }
};
struct FitDeleter {
    void operator()(wcpi_fit *f) const {
        wcpi_fit_free(f);
    }
};
struct TagsDeleter {
    void operator()(wcpi_tags *t) const {
        wcpi_tags_free(t);
    }
};
using ScenarioPtr = std::unique_ptr<wcpi_scenario, ScenarioDeleter>;
using ScanPtr = std::unique_ptr<wcpi_scan, ScanDeleter>;
using FitPtr = std::unique_ptr<wcpi_fit, FitDeleter>;
using TagsPtr = std::unique_ptr<wcpi_tags, TagsDeleter>;

std::string scenario_json(const wcpi_scenario *s) {
    size_t needed = 0;
    check(wcpi_scenario_to_json(s, nullptr, 0, &needed));
    std::string text(needed, '\0');
    check(wcpi_scenario_to_json(s, text.data(), text.size(), &needed));
    text.resize(needed - 1);
    return text;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs {
    double mean = 0.01;
    double rep_rate_hz = 20e6;
    int n_max = -1;
    bool json = false;
};

int cmd_stats(const StatsArgs &a) {
    int n_max = a.n_max;
    if (n_max < 0) {
        check(wcpi_default_truncation(a.mean, &n_max));
    }
    wcpi_far_rates rates{};
    check(wcpi_far_rates_compute(a.mean, a.rep_rate_hz, &rates));
    std::vector<double> pmf(static_cast<size_t>(n_max) + 2);
    for (int n = 0; n <= n_max + 1; ++n) {
        check(wcpi_poisson_pmf(n, a.mean, &pmf[static_cast<size_t>(n)]));
    }
    auto ratio = [&](int n) {
        if (a.mean == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        double r = 0.0;
        check(wcpi_pmf_ratio(n, a.mean, &r));
        return r;
    };
    if (a.json) {
        nlohmann::ordered_json j;
        j["mean_photon_number"] = a.mean;
        j["rep_rate_hz"] = a.rep_rate_hz;
        j["n_max"] = n_max;
        auto table = nlohmann::ordered_json::array();
        for (int n = 0; n <= n_max; ++n) {
            double r = ratio(n);
            table.push_back({{"n", n},
                             {"p", pmf[static_cast<size_t>(n)]},
                             {"ratio_to_next", std::isfinite(r) ? nlohmann::ordered_json(r) : nullptr}});
        }
        j["pmf"] = table;
        j["singles_avg_hz"] = rates.singles_avg_hz;
        j["singles_max_hz"] = rates.singles_max_hz;
        j["two_photon_singles_max_hz"] = rates.two_photon_singles_max_hz;
        j["coincidence_avg_hz"] = rates.coincidence_avg_hz;
        std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::cout << "mean_photon_number " << format_number(a.mean) << "\n";
    std::cout << "rep_rate_hz " << format_number(a.rep_rate_hz) << "\n";
    std::cout << "n_max " << n_max << "\n";
    std::cout << "# n P(n) P(n)/P(n+1)\n";
    for (int n = 0; n <= n_max; ++n) {
        std::cout << n << " " << format_number(pmf[static_cast<size_t>(n)]) << " " << format_number(ratio(n)) << "\n";
    }
    std::cout << "singles_avg_hz " << format_number(rates.singles_avg_hz) << "\n";
    std::cout << "singles_max_hz " << format_number(rates.singles_max_hz) << "\n";
    std::cout << "two_photon_singles_max_hz " << format_number(rates.two_photon_singles_max_hz) << "\n";
    std::cout << "coincidence_avg_hz " << format_number(rates.coincidence_avg_hz) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
    std::string scenario;
    std::string engine = "analytic";
    std::string grid;
    uint64_t pulses = 1000000;
    uint64_t seed = 1;
    std::string out_dir;
    bool svg = false;
    bool json = false;
    unsigned workers = 0;
    std::optional<double> dphi;
    std::optional<double> mean;
    std::optional<double> dump_tags_dx;
};

ScenarioPtr open_scenario(const std::string &spec) {
    wcpi_scenario *raw = nullptr;
    bool is_file = spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0;
    if (is_file || std::filesystem::is_regular_file(spec)) {
        check(wcpi_scenario_load(spec.c_str(), &raw));
    } else {
        check(wcpi_scenario_builtin(spec.c_str(), &raw));
    }
    return ScenarioPtr(raw);
}

void apply(wcpi_scenario *s, const nlohmann::json &patch) {
    check(wcpi_scenario_apply_json(s, patch.dump().c_str()));
}

std::vector<double> parse_grid_triplet(const std::string &text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        const char *first = item.data();
        if (!item.empty() && item[0] == '+') {
            ++first;
        }
        auto res = std::from_chars(first, item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
            invalid("--grid expects start:stop:step in mm, got '" + text + "'");
        }
        parts.push_back(v);
    }
    if (parts.size() != 3) {
        invalid("--grid expects start:stop:step in mm, got '" + text + "'");
    }
    return parts;
}

int cmd_run(const RunArgs &a) {
    if (a.engine != "analytic" && a.engine != "mc" && a.engine != "both") {
        invalid("--engine must be analytic, mc or both");
    }
    bool mc = a.engine != "analytic";
    if (mc && a.pulses < 1) {
        invalid("--pulses must be >= 1 for Monte Carlo runs");
    }
    ScenarioPtr scenario = open_scenario(a.scenario);
    if (!a.grid.empty()) {
        auto g = parse_grid_triplet(a.grid);
        apply(scenario.get(), {{"grid", {{"start_mm", g[0]}, {"stop_mm", g[1]}, {"step_mm", g[2]}}}});
    }
    if (a.mean) {
        apply(scenario.get(), {{"source", {{"mean_photon_number", *a.mean}}}});
    }
    if (a.dphi) {
        apply(scenario.get(), {{"extra_phase_rad", *a.dphi}});
    }

    size_t errors = 0;
    size_t warnings = 0;
    size_t needed = 0;
    check(wcpi_scenario_validate(scenario.get(), &errors, &warnings, nullptr, 0, &needed));
    std::string report(needed, '\0');
    check(wcpi_scenario_validate(scenario.get(), &errors, &warnings, report.data(), report.size(), &needed));
    report.resize(needed - 1);
    if (errors > 0) {
        std::cerr << report;
        invalid("scenario '" + std::string(wcpi_scenario_name(scenario.get())) + "' is invalid");
    }
    if (warnings > 0) {
        std::cerr << report;
    }

    size_t points = 0;
    check(wcpi_scenario_grid(scenario.get(), nullptr, 0, &points));
    if (points == 0) {
        invalid("grid is empty");
    }
    std::vector<double> grid(points);
    check(wcpi_scenario_grid(scenario.get(), grid.data(), grid.size(), &points));

    wcpi_scan *raw = nullptr;
    if (mc) {
        wcpi_mc_options opts{a.pulses, a.seed, a.workers, 0};
        check(wcpi_sweep(scenario.get(), grid.data(), grid.size(), &opts, &raw));
    } else {
        check(wcpi_reference_curve(scenario.get(), grid.data(), grid.size(), &raw));
    }
    ScanPtr scan(raw);
    if (a.engine == "both") {
        check(wcpi_scan_attach_analytic(scan.get(), scenario.get()));
    }

    std::string out_dir = a.out_dir;
    if (out_dir.empty()) {
        const char *env = std::getenv("WCPI_OUT_DIR");
        out_dir = env != nullptr && *env != '\0' ? env : ".";
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Failure{WCPI_ERR_IO, "cannot create output directory '" + out_dir + "': " + ec.message()};
    }
    std::string stem = (std::filesystem::path(out_dir) / wcpi_scenario_name(scenario.get())).string();
    std::string csv = stem + ".csv";
    check(wcpi_scan_write_csv(scan.get(), csv.c_str()));
    std::cout << "wrote " << csv << " (" << wcpi_scan_rows(scan.get()) << " rows)\n";
    if (a.svg) {
        std::string svg = stem + ".svg";
        check(wcpi_scan_write_svg(scan.get(), svg.c_str()));
        std::cout << "wrote " << svg << "\n";
    }
    if (a.json) {
        nlohmann::ordered_json manifest;
        manifest["scenario"] = nlohmann::ordered_json::parse(scenario_json(scenario.get()));
        manifest["engine"] = a.engine;
        manifest["points"] = points;
        if (mc) {
            manifest["pulses_per_point"] = a.pulses;
            manifest["seed"] = a.seed;
        }
        manifest["csv"] = csv;
        std::string path = stem + ".json";
        std::ofstream out(path, std::ios::binary);
        out << manifest.dump(2) << "\n";
        if (!out) {
            throw Failure{WCPI_ERR_IO, "cannot write '" + path + "'"};
        }
        std::cout << "wrote " << path << "\n";
    }
    if (a.dump_tags_dx) {
        wcpi_tags *tags_raw = nullptr;
        check(wcpi_simulate_point_tags(scenario.get(), *a.dump_tags_dx, a.pulses, a.seed, &tags_raw));
        TagsPtr tags(tags_raw);
        std::string path = stem + "_tags.csv";
        check(wcpi_tags_write_csv(tags.get(), path.c_str()));
        std::cout << "wrote " << path << " (" << wcpi_tags_count(tags.get()) << " tags)\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
    std::string input;
    std::string model;
    std::string column;
    int port = 1;
    bool fit_wavelength = false;
    double wavelength_nm = 775.0;
    std::optional<double> pin_sigma;
    std::optional<double> pin_x0;
    std::string out;
};

bool is_singles_column(const std::string &name) {
    if (name.size() < 6 || name.compare(0, 2, "nd") != 0 || name.compare(name.size() - 3, 3, "_hz") != 0) {
        return false;
    }
    for (size_t i = 2; i < name.size() - 3; ++i) {
        if (name[i] < '0' || name[i] > '9') {
            return false;
        }
    }
    return true;
}

std::string default_column(const wcpi_scan *scan, const FitArgs &a) {
    if (a.model == "opi") {
        return a.port < 0 ? "nd2_hz" : "nd1_hz";
    }
    for (size_t i = 0; i < wcpi_scan_column_count(scan); ++i) {
        std::string name = wcpi_scan_column_name(scan, i);
        if (name == "dx_mm" || name == "exposure_s" || name.rfind("analytic_", 0) == 0 || is_singles_column(name)) {
            continue;
        }
        return name;
    }
    invalid("no coincidence column in the input; pass --column");
}

int cmd_fit(const FitArgs &a) {
    wcpi_scan *raw = nullptr;
    check(wcpi_scan_read_csv(a.input.c_str(), &raw));
    ScanPtr scan(raw);
    std::string column = a.column.empty() ? default_column(scan.get(), a) : a.column;
    wcpi_fit_options opts{};
    opts.port_sign = a.port;
    opts.fit_wavelength = a.fit_wavelength ? 1 : 0;
    opts.wavelength_nm = a.wavelength_nm;
    if (a.pin_sigma) {
        opts.pin_sigma = 1;
        opts.sigma_mm = *a.pin_sigma;
    }
    if (a.pin_x0) {
        opts.pin_x0 = 1;
        opts.x0_mm = *a.pin_x0;
    }
    wcpi_fit *fit_raw = nullptr;
    check(wcpi_fit_scan(scan.get(), column.c_str(), a.model.c_str(), &opts, &fit_raw));
    FitPtr fit(fit_raw);
    size_t needed = 0;
    check(wcpi_fit_to_json(fit.get(), nullptr, 0, &needed));
    std::string text(needed, '\0');
    check(wcpi_fit_to_json(fit.get(), text.data(), text.size(), &needed));
    text.resize(needed - 1);
    auto doc = nlohmann::ordered_json::parse(text);
    nlohmann::ordered_json out;
    out["input"] = a.input;
    out["column"] = column;
    for (auto &[key, value] : doc.items()) {
        out[key] = value;
    }
    std::string rendered = out.dump(2) + "\n";
    std::cout << rendered;
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        f << rendered;
        if (!f) {
            throw Failure{WCPI_ERR_IO, "cannot write '" + a.out + "'"};
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// count

struct CountArgs {
    std::string tags;
    std::string pair = "1,2";
    double delay_ns = 0.0;
    double window_ns = 4.0;
    double duration_s = 0.0;
    std::string out;
};

int cmd_count(const CountArgs &a) {
    int ch_a = 0;
    int ch_b = 0;
    char sep = 0;
    std::stringstream ss(a.pair);
    if (!(ss >> ch_a >> sep >> ch_b) || sep != ',' || !ss.eof()) {
        invalid("--pair expects two channels as a,b");
    }
    wcpi_tags *raw = nullptr;
    check(wcpi_tags_read_csv(a.tags.c_str(), &raw));
    TagsPtr tags(raw);
    wcpi_coincidence_config cfg{ch_a, ch_b, a.window_ns, a.delay_ns, a.duration_s};
    wcpi_coincidence_result r{};
    check(wcpi_count_coincidences(tags.get(), &cfg, &r));
    std::string text = "pair,count,duration_s,rate_hz\n";
    text += "d" + std::to_string(ch_a) + "d" + std::to_string(ch_b) + "," + std::to_string(r.pair_count) + "," +
            format_number(r.duration_s) + "," + format_number(r.rate_hz) + "\n";
    std::cout << text;
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::binary);
        f << text;
        if (!f) {
            throw Failure{WCPI_ERR_IO, "cannot write '" + a.out + "'"};
        }
    }
    return kExitOk;
}

int cmd_scenarios() {
    for (size_t i = 0; i < wcpi_builtin_count(); ++i) {
        std::cout << wcpi_builtin_name(i) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Weak-coherent-pulse interference simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(wcpi_version()));

    auto *scenarios = app.add_subcommand("scenarios", "List builtin scenarios");

    StatsArgs stats_args;
    auto *stats = app.add_subcommand("stats", "Photon-number table and far-field rates");
    stats->add_option("--mean", stats_args.mean, "Mean photon number per pulse")->required();
    stats->add_option("--rep-rate", stats_args.rep_rate_hz, "Repetition rate in Hz");
    stats->add_option("--nmax", stats_args.n_max, "Last photon number in the table");
    stats->add_flag("--json", stats_args.json, "Print JSON instead of text");

    RunArgs run_args;
    double dphi = 0.0;
    double mean = 0.0;
    double dump_dx = 0.0;
    auto *run = app.add_subcommand("run", "Compute a fringe scan");
    run->add_option("--scenario", run_args.scenario, "Builtin name or scenario JSON file")->required();
    run->add_option("--engine", run_args.engine, "analytic, mc or both");
    run->add_option("--grid", run_args.grid, "start:stop:step in mm");
    run->add_option("--pulses", run_args.pulses, "Pulses per grid point (mc)");
    run->add_option("--seed", run_args.seed, "Random seed (mc)");
    run->add_option("--out", run_args.out_dir, "Output directory (default $WCPI_OUT_DIR or .)");
    run->add_flag("--svg", run_args.svg, "Also write an SVG plot");
    run->add_flag("--json", run_args.json, "Also write a JSON run manifest");
    run->add_option("--workers", run_args.workers, "Worker threads for mc (0 = all cores)");
    auto *dphi_opt = run->add_option("--dphi", dphi, "Extra phase of the dual interferometer (rad)");
    auto *mean_opt = run->add_option("--mean", mean, "Override the mean photon number");
    auto *dump_opt = run->add_option("--dump-tags", dump_dx, "Write the time tags of one point at this dx (mm)");

    FitArgs fit_args;
    double pin_sigma = 0.0;
    double pin_x0 = 0.0;
    auto *fit = app.add_subcommand("fit", "Fit a fringe model to a scan CSV");
    fit->add_option("--input", fit_args.input, "Scan CSV")->required();
    fit->add_option("--model", fit_args.model, "opi, tpi, hom_dip, hom_peak or dual_mzi")->required();
    fit->add_option("--column", fit_args.column, "Column to fit");
    fit->add_option("--port", fit_args.port, "Port sign for opi (+1 or -1)");
    fit->add_flag("--fit-wavelength", fit_args.fit_wavelength, "Let the wavelength vary");
    fit->add_option("--wavelength", fit_args.wavelength_nm, "Wavelength in nm");
    auto *pin_sigma_opt = fit->add_option("--pin-sigma", pin_sigma, "Hold sigma (mm) fixed");
    auto *pin_x0_opt = fit->add_option("--pin-x0", pin_x0, "Hold x0 (mm) fixed");
    fit->add_option("--out", fit_args.out, "Also write the result to this file");

    CountArgs count_args;
    auto *count = app.add_subcommand("count", "Count coincidences in a tag CSV");
    count->add_option("--tags", count_args.tags, "Tag CSV (channel,time_ps)")->required();
    count->add_option("--pair", count_args.pair, "Channels a,b");
    count->add_option("--delay", count_args.delay_ns, "Electrical delay in ns");
    count->add_option("--window", count_args.window_ns, "Coincidence window in ns");
    count->add_option("--duration", count_args.duration_s, "Run length in s (default: last tag)");
    count->add_option("--out", count_args.out, "Also write the CSV to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (scenarios->parsed()) {
            return cmd_scenarios();
        }
        if (stats->parsed()) {
            return cmd_stats(stats_args);
        }
        if (run->parsed()) {
            if (*dphi_opt) {
                run_args.dphi = dphi;
            }
            if (*mean_opt) {
                run_args.mean = mean;
            }
            if (*dump_opt) {
                run_args.dump_tags_dx = dump_dx;
            }
            return cmd_run(run_args);
        }
        if (fit->parsed()) {
            if (*pin_sigma_opt) {
                fit_args.pin_sigma = pin_sigma;
            }
            if (*pin_x0_opt) {
                fit_args.pin_x0 = pin_x0;
            }
            return cmd_fit(fit_args);
        }
        if (count->parsed()) {
            return cmd_count(count_args);
        }
    } catch (const Failure &f) {
        std::cerr << "wcpi: " << f.message << "\n";
        return exit_code(f.status);
    } catch (const std::exception &e) {
        std::cerr << "wcpi: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
