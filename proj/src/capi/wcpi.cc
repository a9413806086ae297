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

#include "wcpi/wcpi.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>

#include "wcpi/coincidence.h"
#include "wcpi/errors.h"
#include "wcpi/fringe_fit.h"
#include "wcpi/io.h"
#include "wcpi/mc_engine.h"
#include "wcpi/photon_stats.h"
#include "wcpi/scenarios.h"

struct wcpi_scenario {
    wcpi::ScenarioConfig config;
};

struct wcpi_scan {
    wcpi::FringeScan scan;
    std::vector<std::string> names;  // cached for wcpi_scan_column_name
};

struct wcpi_fit {
    wcpi::FitResult result;
};

struct wcpi_tags {
    std::vector<wcpi::TimeTag> tags;
    double duration_s = 0.0;
};

namespace {

thread_local std::string g_last_error;

wcpi_status fail(wcpi_status status, const std::string &message) {
    g_last_error = message;
    return status;
}

template <typename F>
wcpi_status guarded(F &&body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const wcpi::ConfigError &e) {
        return fail(WCPI_ERR_CONFIG, e.what());
    } catch (const wcpi::IoError &e) {
        return fail(WCPI_ERR_IO, e.what());
    } catch (const wcpi::LookupError &e) {
        return fail(WCPI_ERR_LOOKUP, e.what());
    } catch (const wcpi::InputError &e) {
        return fail(WCPI_ERR_INPUT, e.what());
    } catch (const std::domain_error &e) {
        return fail(WCPI_ERR_DOMAIN, e.what());
    } catch (const std::bad_alloc &) {
        return fail(WCPI_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(WCPI_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(WCPI_ERR_INTERNAL, "unknown failure");
    }
}

#define WCPI_REQUIRE(cond)                                                 \
    do {                                                                   \
        if (!(cond)) {                                                     \
            return fail(WCPI_ERR_ARGUMENT, "invalid argument: " #cond);    \
        }                                                                  \
    } while (0)

wcpi_status copy_text(const std::string &text, char *buf, size_t capacity, size_t *needed) {
    if (needed != nullptr) {
        *needed = text.size() + 1;
    }
    if (buf == nullptr) {
        return WCPI_OK;
    }
    if (capacity < text.size() + 1) {
        return fail(WCPI_ERR_ARGUMENT, "buffer too small");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return WCPI_OK;
}

wcpi_status copy_values(const std::vector<double> &values, double *out, size_t capacity, size_t *count) {
    if (count != nullptr) {
        *count = values.size();
    }
    if (out == nullptr) {
        return WCPI_OK;
    }
    if (capacity < values.size()) {
        return fail(WCPI_ERR_ARGUMENT, "buffer too small");
    }
    std::copy(values.begin(), values.end(), out);
    return WCPI_OK;
}

void refresh_names(wcpi_scan &s) {
    s.names.clear();
    s.names.push_back("dx_mm");
    for (const auto &c : s.scan.columns) {
        s.names.push_back(c.name);
    }
    if (!s.scan.exposure_s.empty()) {
        s.names.push_back("exposure_s");
    }
}

wcpi_scan *wrap(wcpi::FringeScan scan) {
    auto *s = new wcpi_scan{std::move(scan), {}};
    refresh_names(*s);
    return s;
}

}  // namespace

extern "C" {

const char *wcpi_last_error(void) {
    return g_last_error.c_str();
}

const char *wcpi_version(void) {
    return "0.1.0";
}

wcpi_status wcpi_poisson_pmf(int n, double mean, double *out) {
    return guarded([&] {
        WCPI_REQUIRE(out != nullptr);
        *out = wcpi::poisson_pmf(n, wcpi::MeanPhotonNumber(mean));
        return WCPI_OK;
    });
}

wcpi_status wcpi_pmf_ratio(int n, double mean, double *out) {
    return guarded([&] {
        WCPI_REQUIRE(out != nullptr);
        *out = wcpi::pmf_ratio(n, wcpi::MeanPhotonNumber(mean));
        return WCPI_OK;
    });
}

wcpi_status wcpi_default_truncation(double mean, int *out) {
    return guarded([&] {
        WCPI_REQUIRE(out != nullptr);
        *out = wcpi::default_truncation(wcpi::MeanPhotonNumber(mean));
        return WCPI_OK;
    });
}

wcpi_status wcpi_far_rates_compute(double mean, double rep_rate_hz, wcpi_far_rates *out) {
    return guarded([&] {
        WCPI_REQUIRE(out != nullptr);
        wcpi::SourceSpec source;
        source.mean_photon_number = wcpi::MeanPhotonNumber(mean);
        source.rep_rate_hz = rep_rate_hz;
        source.validate();
        auto r = wcpi::far_rates(source);
        *out = {r.singles_avg_hz, r.coincidence_avg_hz, r.singles_max_hz, r.two_photon_singles_max_hz};
        return WCPI_OK;
    });
}

size_t wcpi_builtin_count(void) {
    return wcpi::builtin_names().size();
}

const char *wcpi_builtin_name(size_t index) {
    const auto &names = wcpi::builtin_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

wcpi_status wcpi_scenario_builtin(const char *name, wcpi_scenario **out) {
    return guarded([&] {
        WCPI_REQUIRE(name != nullptr && out != nullptr);
        *out = new wcpi_scenario{wcpi::builtin(name)};
        return WCPI_OK;
    });
}

wcpi_status wcpi_scenario_from_json(const char *json, wcpi_scenario **out) {
    return guarded([&] {
        WCPI_REQUIRE(json != nullptr && out != nullptr);
        *out = new wcpi_scenario{wcpi::scenario_from_json(json)};
        return WCPI_OK;
    });
}

wcpi_status wcpi_scenario_load(const char *path, wcpi_scenario **out) {
    return guarded([&] {
        WCPI_REQUIRE(path != nullptr && out != nullptr);
        *out = new wcpi_scenario{wcpi::load_scenario_file(path)};
        return WCPI_OK;
    });
}

wcpi_status wcpi_scenario_apply_json(wcpi_scenario *scenario, const char *json) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr && json != nullptr);
        scenario->config = wcpi::apply_json_overrides(scenario->config, json);
        return WCPI_OK;
    });
}

wcpi_status wcpi_scenario_to_json(const wcpi_scenario *scenario, char *buf, size_t capacity, size_t *needed) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr);
        return copy_text(wcpi::scenario_to_json(scenario->config), buf, capacity, needed);
    });
}

wcpi_status wcpi_scenario_validate(const wcpi_scenario *scenario, size_t *errors, size_t *warnings, char *buf,
                                   size_t capacity, size_t *needed) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr);
        size_t n_err = 0;
        size_t n_warn = 0;
        std::string text;
        for (const auto &v : wcpi::validate(scenario->config)) {
            bool is_error = v.severity == wcpi::Violation::Severity::kError;
            (is_error ? n_err : n_warn)++;
            text += std::string(is_error ? "error: " : "warning: ") + v.field + ": " + v.message + "\n";
        }
        if (errors != nullptr) {
            *errors = n_err;
        }
        if (warnings != nullptr) {
            *warnings = n_warn;
        }
        return copy_text(text, buf, capacity, needed);
    });
}

const char *wcpi_scenario_name(const wcpi_scenario *scenario) {
    return scenario != nullptr ? scenario->config.name.c_str() : nullptr;
}

wcpi_status wcpi_scenario_grid(const wcpi_scenario *scenario, double *out, size_t capacity, size_t *count) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr);
        return copy_values(scenario->config.grid.points(), out, capacity, count);
    });
}

void wcpi_scenario_free(wcpi_scenario *scenario) {
    delete scenario;
}

wcpi_status wcpi_make_grid(double start_mm, double stop_mm, double step_mm, double *out, size_t capacity,
                           size_t *count) {
    return guarded([&] {
        return copy_values(wcpi::make_grid(start_mm, stop_mm, step_mm), out, capacity, count);
    });
}

wcpi_status wcpi_reference_curve(const wcpi_scenario *scenario, const double *grid, size_t points, wcpi_scan **out) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr && out != nullptr && (grid != nullptr || points == 0));
        std::vector<double> g(grid, grid + points);
        *out = wrap(wcpi::reference_curve(scenario->config, g));
        return WCPI_OK;
    });
}

wcpi_status wcpi_sweep(const wcpi_scenario *scenario, const double *grid, size_t points,
                       const wcpi_mc_options *options, wcpi_scan **out) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr && options != nullptr && out != nullptr && (grid != nullptr || points == 0));
        wcpi::SweepOptions opts;
        opts.pulses_per_point = options->pulses;
        opts.seed = wcpi::RngSeed{options->seed};
        opts.workers = options->workers;
        opts.engine = options->engine_photon_level ? wcpi::McEngine::kPhotonLevel : wcpi::McEngine::kIntensity;
        std::vector<double> g(grid, grid + points);
        *out = wrap(wcpi::sweep(scenario->config, g, opts));
        return WCPI_OK;
    });
}

wcpi_status wcpi_scan_attach_analytic(wcpi_scan *scan, const wcpi_scenario *scenario) {
    return guarded([&] {
        WCPI_REQUIRE(scan != nullptr && scenario != nullptr);
        auto ref = wcpi::reference_curve(scenario->config, scan->scan.dx_mm);
        for (auto &c : ref.columns) {
            scan->scan.add_column("analytic_" + c.name).values = std::move(c.values);
        }
        refresh_names(*scan);
        return WCPI_OK;
    });
}

wcpi_status wcpi_scan_read_csv(const char *path, wcpi_scan **out) {
    return guarded([&] {
        WCPI_REQUIRE(path != nullptr && out != nullptr);
        *out = wrap(wcpi::read_scan_csv_file(path));
        return WCPI_OK;
    });
}

wcpi_status wcpi_scan_write_csv(const wcpi_scan *scan, const char *path) {
    return guarded([&] {
        WCPI_REQUIRE(scan != nullptr && path != nullptr);
        wcpi::write_scan_csv_file(path, scan->scan);
        return WCPI_OK;
    });
}

wcpi_status wcpi_scan_write_svg(const wcpi_scan *scan, const char *path) {
    return guarded([&] {
        WCPI_REQUIRE(scan != nullptr && path != nullptr);
        wcpi::write_scan_svg_file(path, scan->scan);
        return WCPI_OK;
    });
}

size_t wcpi_scan_rows(const wcpi_scan *scan) {
    return scan != nullptr ? scan->scan.rows() : 0;
}

size_t wcpi_scan_column_count(const wcpi_scan *scan) {
    return scan != nullptr ? scan->names.size() : 0;
}

const char *wcpi_scan_column_name(const wcpi_scan *scan, size_t index) {
    if (scan == nullptr || index >= scan->names.size()) {
        return nullptr;
    }
    return scan->names[index].c_str();
}

wcpi_status wcpi_scan_values(const wcpi_scan *scan, const char *column, double *out, size_t capacity) {
    return guarded([&] {
        WCPI_REQUIRE(scan != nullptr && column != nullptr && out != nullptr);
        std::string name(column);
        const std::vector<double> *values = nullptr;
        if (name == "dx_mm") {
            values = &scan->scan.dx_mm;
        } else if (name == "exposure_s" && !scan->scan.exposure_s.empty()) {
            values = &scan->scan.exposure_s;
        } else {
            values = &scan->scan.column(name);
        }
        return copy_values(*values, out, capacity, nullptr);
    });
}

void wcpi_scan_free(wcpi_scan *scan) {
    delete scan;
}

wcpi_status wcpi_simulate_point_tags(const wcpi_scenario *scenario, double dx_mm, uint64_t pulses, uint64_t seed,
                                     wcpi_tags **out) {
    return guarded([&] {
        WCPI_REQUIRE(scenario != nullptr && out != nullptr);
        auto point = wcpi::simulate_point(scenario->config, dx_mm, pulses, wcpi::RngSeed{seed});
        *out = new wcpi_tags{wcpi::merged_tags(point), point.duration_s};
        return WCPI_OK;
    });
}

wcpi_status wcpi_tags_read_csv(const char *path, wcpi_tags **out) {
    return guarded([&] {
        WCPI_REQUIRE(path != nullptr && out != nullptr);
        *out = new wcpi_tags{wcpi::read_tags_csv_file(path), 0.0};
        return WCPI_OK;
    });
}

wcpi_status wcpi_tags_write_csv(const wcpi_tags *tags, const char *path) {
    return guarded([&] {
        WCPI_REQUIRE(tags != nullptr && path != nullptr);
        wcpi::write_tags_csv_file(path, tags->tags);
        return WCPI_OK;
    });
}

size_t wcpi_tags_count(const wcpi_tags *tags) {
    return tags != nullptr ? tags->tags.size() : 0;
}

double wcpi_tags_duration(const wcpi_tags *tags) {
    return tags != nullptr ? tags->duration_s : 0.0;
}

void wcpi_tags_free(wcpi_tags *tags) {
    delete tags;
}

wcpi_status wcpi_count_coincidences(const wcpi_tags *tags, const wcpi_coincidence_config *config,
                                    wcpi_coincidence_result *out) {
    return guarded([&] {
        WCPI_REQUIRE(tags != nullptr && config != nullptr && out != nullptr);
        auto streams = wcpi::split_channels(tags->tags);
        wcpi::CoincidenceConfig cfg;
        cfg.channel_a = config->channel_a;
        cfg.channel_b = config->channel_b;
        cfg.window_ns = config->window_ns;
        cfg.electrical_delay_ns = config->delay_ns;
        std::optional<double> duration;
        if (config->duration_s > 0.0) {
            duration = config->duration_s;
        }
        auto r = wcpi::count_coincidences(streams[cfg.channel_a], streams[cfg.channel_b], cfg, duration);
        *out = {r.pair_count, r.duration_s, r.rate_hz};
        return WCPI_OK;
    });
}

wcpi_status wcpi_accidental_rate(double singles_a_hz, double singles_b_hz, double rep_rate_hz, double *out) {
    return guarded([&] {
        WCPI_REQUIRE(out != nullptr);
        *out = wcpi::accidental_rate(singles_a_hz, singles_b_hz, rep_rate_hz);
        return WCPI_OK;
    });
}

wcpi_status wcpi_fit_scan(const wcpi_scan *scan, const char *column, const char *model,
                          const wcpi_fit_options *options, wcpi_fit **out) {
    return guarded([&] {
        WCPI_REQUIRE(scan != nullptr && column != nullptr && model != nullptr && out != nullptr);
        wcpi::FitModel m;
        m.kind = wcpi::parse_fit_kind(model);
        if (options != nullptr) {
            if (options->port_sign != 0 && options->port_sign != 1 && options->port_sign != -1) {
                return fail(WCPI_ERR_ARGUMENT, "port_sign must be +1 or -1");
            }
            m.port = options->port_sign < 0 ? wcpi::PortSign::kMinus : wcpi::PortSign::kPlus;
            m.fit_wavelength = options->fit_wavelength != 0;
            if (options->wavelength_nm > 0.0) {
                m.wavelength_nm = options->wavelength_nm;
            }
            if (options->pin_sigma) {
                m.pinned[wcpi::FitParam::kSigma] = options->sigma_mm;
            }
            if (options->pin_x0) {
                m.pinned[wcpi::FitParam::kX0] = options->x0_mm;
            }
        }
        auto data = wcpi::FitData::from_scan(scan->scan, column);
        *out = new wcpi_fit{wcpi::fit(data, m)};
        return WCPI_OK;
    });
}

wcpi_status wcpi_fit_to_json(const wcpi_fit *fit, char *buf, size_t capacity, size_t *needed) {
    return guarded([&] {
        WCPI_REQUIRE(fit != nullptr);
        return copy_text(wcpi::fit_result_json(fit->result), buf, capacity, needed);
    });
}

int wcpi_fit_converged(const wcpi_fit *fit) {
    return fit != nullptr && fit->result.converged ? 1 : 0;
}

wcpi_status wcpi_fit_param(const wcpi_fit *fit, const char *name, double *out) {
    return guarded([&] {
        WCPI_REQUIRE(fit != nullptr && name != nullptr && out != nullptr);
        const auto &r = fit->result;
        std::string key(name);
        if (key == "fwhm_mm") {
            *out = r.fwhm_mm;
            return WCPI_OK;
        }
        if (key == "visibility") {
            *out = r.visibility;
            return WCPI_OK;
        }
        if (key == "rss") {
            *out = r.rss;
            return WCPI_OK;
        }
        bool want_error = key.size() > 4 && key.compare(key.size() - 4, 4, "_err") == 0;
        if (want_error) {
            key.resize(key.size() - 4);
        }
        for (size_t i = 0; i < wcpi::kFitParamCount; ++i) {
            auto q = static_cast<wcpi::FitParam>(i);
            if (wcpi::to_string(q) == key) {
                *out = want_error ? r.std_error[q] : r.params[q];
                return WCPI_OK;
            }
        }
        return fail(WCPI_ERR_LOOKUP, "unknown fit quantity '" + std::string(name) + "'");
    });
}

void wcpi_fit_free(wcpi_fit *fit) {
    delete fit;
}

}  // extern "C"
