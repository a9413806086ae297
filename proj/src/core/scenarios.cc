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

#include "wcpi/scenarios.h"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "wcpi/errors.h"

namespace wcpi {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

template <typename Enum, size_t N>
struct EnumNames {
    std::array<std::pair<Enum, std::string_view>, N> entries;

    std::string_view name(Enum e) const {
        for (const auto &[v, n] : entries) {
            if (v == e) {
                return n;
            }
        }
        throw std::logic_error("unnamed enum value");
    }

    Enum parse(std::string_view text, const char *what) const {
        for (const auto &[v, n] : entries) {
            if (n == text) {
                return v;
            }
        }
        throw ConfigError("unknown " + std::string(what) + " '" + std::string(text) + "'");
    }
};

constexpr EnumNames<ScenarioKind, 4> kKindNames{{{
    {ScenarioKind::kSingleMziStable, "single_mzi_stable"},
    {ScenarioKind::kSingleMziRandomized, "single_mzi_randomized"},
    {ScenarioKind::kTemporalSeparated, "temporal_separated"},
    {ScenarioKind::kDualMzi, "dual_mzi"},
}}};

constexpr EnumNames<RateNormalization, 2> kNormalizationNames{{{
    {RateNormalization::kAccidental, "accidental"},
    {RateNormalization::kTwoPhoton, "two_photon"},
}}};

constexpr EnumNames<PhaseRandomization, 2> kPhaseNames{{{
    {PhaseRandomization::kPerPeriod, "per_period"},
    {PhaseRandomization::kPerSlot, "per_slot"},
}}};

bool is_single_mzi(ScenarioKind kind) {
    return kind == ScenarioKind::kSingleMziStable || kind == ScenarioKind::kSingleMziRandomized;
}

ScenarioConfig base_config(std::string name, ScenarioKind kind, double mean, VisibilityPair vis, int channels) {
    ScenarioConfig c;
    c.name = std::move(name);
    c.kind = kind;
    c.source.mean_photon_number = MeanPhotonNumber(mean);
    c.vis = vis;
    for (int ch = 1; ch <= channels; ++ch) {
        c.detectors.push_back(DetectorSpec{ch, 1.0, 0.0});
    }
    return c;
}

CoincidenceConfig pair(int a, int b, double window_ns, double delay_ns) {
    CoincidenceConfig c;
    c.channel_a = a;
    c.channel_b = b;
    c.window_ns = window_ns;
    c.electrical_delay_ns = delay_ns;
    return c;
}

ScenarioConfig temporal_builtin(std::string name, double delay_ns, double window_ns) {
    auto c = base_config(std::move(name), ScenarioKind::kTemporalSeparated, 0.0305, {1.0, 1.0}, 2);
    c.optical_delay_ns = 8.0;
    c.coincidence.push_back(pair(1, 2, window_ns, delay_ns));
    return c;
}

double detector_efficiency(const ScenarioConfig &config, int channel) {
    for (const auto &d : config.detectors) {
        if (d.channel == channel) {
            return d.efficiency;
        }
    }
    return 1.0;
}

/// Visibility knob acting on an output port.
double port_visibility(const ScenarioConfig &config, int channel) {
    if (config.kind == ScenarioKind::kDualMzi) {
        return channel <= 2 ? config.vis.v1 : config.vis.v2;
    }
    return channel == 1 ? config.vis.v1 : config.vis.v2;
}

/// Far-field singles rate of one port before detector efficiency.
double far_singles(const ScenarioConfig &config) {
    const SourceSpec &s = config.source;
    switch (config.kind) {
        case ScenarioKind::kSingleMziStable:
        case ScenarioKind::kSingleMziRandomized:
            if (config.normalization == RateNormalization::kTwoPhoton) {
                return 0.5 * far_rates(s).two_photon_singles_max_hz;
            }
            return far_rates(s).singles_avg_hz;
        case ScenarioKind::kTemporalSeparated: {
            MeanPhotonNumber half{s.mean() / 2.0};
            return (poisson_pmf(1, half) + poisson_pmf(2, half)) * s.rep_rate_hz;
        }
        case ScenarioKind::kDualMzi: {
            SourceSpec half = s;
            half.mean_photon_number = MeanPhotonNumber(s.mean() / 2.0);
            return far_rates(half).singles_avg_hz;
        }
    }
    throw std::logic_error("unknown scenario kind");
}

bool pairing_selected(const CoincidenceConfig &pair, double offset_ns) {
    return std::abs(offset_ns - pair.electrical_delay_ns) <= pair.window_ns;
}

double temporal_coincidence(const ScenarioConfig &config, const CoincidenceConfig &pair, double dx_mm) {
    const SourceSpec &s = config.source;
    double dt = config.optical_delay_ns;
    bool same = pairing_selected(pair, 0.0);
    bool early_late = pairing_selected(pair, dt);
    bool late_early = pairing_selected(pair, -dt);
    VisibilityPair vis{port_visibility(config, 1), port_visibility(config, 2)};
    if (same && early_late && late_early) {
        return temporal_fringe(dx_mm, s, TemporalCase::kWideWindow, vis);
    }
    if (same && !early_late && !late_early) {
        return temporal_fringe(dx_mm, s, TemporalCase::kSamePulse, vis);
    }
    bool shared_phase = config.phase_randomization == PhaseRandomization::kPerPeriod;
    if (!same && (early_late != late_early) && shared_phase) {
        return temporal_fringe(dx_mm, s, TemporalCase::kCrossPulse, vis);
    }
    // Any other selection: add up the selected slot pairings one by one.
    double g = fringe_envelope(dx_mm, s.envelope_sigma_mm);
    double depth = 0.5 * vis.v1 * vis.v2 * g * g;
    double cross_depth = shared_phase ? depth : 0.0;
    double rate = 0.0;
    if (same) {
        rate += temporal_rates(s, TemporalCase::kSamePulse) * (1.0 - depth);
    }
    double cross = temporal_rates(s, TemporalCase::kCrossPulse) * (1.0 + cross_depth);
    rate += (early_late ? cross : 0.0) + (late_early ? cross : 0.0);
    return rate;
}

double dual_coincidence(const ScenarioConfig &config, const CoincidenceConfig &pair, double dx_mm) {
    if (!pairing_selected(pair, 0.0)) {
        return 0.0;
    }
    const SourceSpec &s = config.source;
    double singles = far_singles(config);
    double baseline = accidental_rate(singles, singles, s.rep_rate_hz);
    int a = pair.channel_a;
    int b = pair.channel_b;
    double va = port_visibility(config, a);
    double vb = port_visibility(config, b);
    bool a_first = a <= 2;
    bool b_first = b <= 2;
    if (a_first == b_first) {
        // Both ports of one interferometer: a phase-averaged HOM dip with the
        // half-path envelope.
        double g = fringe_envelope(0.5 * dx_mm, s.envelope_sigma_mm);
        return baseline * (1.0 - 0.5 * va * vb * g * g);
    }
    // Ports 1 and 3 carry the same sign, 2 and 4 the opposite one.
    int sign_a = (a % 2 == 1) ? 1 : -1;
    int sign_b = (b % 2 == 1) ? 1 : -1;
    DualPair which = sign_a * sign_b > 0 ? DualPair::kD1D3 : DualPair::kD2D3;
    return dual_mzi_fringe(dx_mm, config.dual_phase(), which, VisibilityPair{va, vb}, baseline, s);
}

// ---------------------------------------------------------------------------
// JSON

void reject_unknown(const json &obj, std::initializer_list<std::string_view> allowed, const std::string &where) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be an object");
    }
    for (const auto &item : obj.items()) {
        bool known = false;
        for (auto a : allowed) {
            if (item.key() == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("unknown field '" + (where.empty() ? "" : where + ".") + item.key() + "'");
        }
    }
}

template <typename T>
void read(const json &obj, const char *key, T &out, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return;
    }
    try {
        out = it->template get<T>();
    } catch (const json::exception &) {
        throw ConfigError("field '" + where + key + "' has the wrong type");
    }
}

struct ParseOutcome {
    ScenarioConfig config;
    std::vector<Violation> violations;
};

ParseOutcome parse_document(const json &doc);

json config_to_json(const ScenarioConfig &c) {
    json j;
    j["name"] = c.name;
    j["kind"] = std::string(to_string(c.kind));
    j["source"] = {
        {"mean_photon_number", c.source.mean()},
        {"rep_rate_hz", c.source.rep_rate_hz},
        {"wavelength_nm", c.source.wavelength_nm},
        {"envelope_sigma_mm", c.source.envelope_sigma_mm},
    };
    j["detectors"] = json::array();
    for (const auto &d : c.detectors) {
        j["detectors"].push_back({{"channel", d.channel}, {"efficiency", d.efficiency}, {"dark_rate_hz", d.dark_rate_hz}});
    }
    j["coincidence"] = json::array();
    for (const auto &p : c.coincidence) {
        j["coincidence"].push_back({{"a", p.channel_a},
                                    {"b", p.channel_b},
                                    {"window_ns", p.window_ns},
                                    {"delay_ns", p.electrical_delay_ns},
                                    {"label", p.effective_label()}});
    }
    j["visibility"] = {{"v1", c.vis.v1}, {"v2", c.vis.v2}};
    j["optical_delay_ns"] = c.optical_delay_ns;
    j["extra_phase_rad"] = c.extra_phase_rad ? json(*c.extra_phase_rad) : json(nullptr);
    if (c.glass_plate) {
        j["glass_plate"] = {{"thickness_mm", c.glass_plate->plate.thickness_mm},
                            {"n_air", c.glass_plate->plate.refr_index_air},
                            {"n_glass", c.glass_plate->plate.refr_index_glass},
                            {"theta_rad", c.glass_plate->theta_rad}};
    } else {
        j["glass_plate"] = nullptr;
    }
    j["normalization"] = std::string(to_string(c.normalization));
    j["phase_randomization"] = std::string(to_string(c.phase_randomization));
    j["grid"] = {{"start_mm", c.grid.start_mm}, {"stop_mm", c.grid.stop_mm}, {"step_mm", c.grid.step_mm}};
    return j;
}

ParseOutcome parse_document(const json &input) {
    json doc = input;
    reject_unknown(doc,
                   {"base", "name", "kind", "source", "detectors", "coincidence", "visibility", "optical_delay_ns",
                    "extra_phase_rad", "glass_plate", "normalization", "phase_randomization", "grid"},
                   "");
    if (doc.contains("base")) {
        std::string base;
        read(doc, "base", base, "");
        json merged = config_to_json(builtin(base));
        doc.erase("base");
        merged.merge_patch(doc);
        doc = std::move(merged);
    }

    ParseOutcome out;
    ScenarioConfig &c = out.config;
    read(doc, "name", c.name, "");
    std::string text;
    if (doc.contains("kind")) {
        read(doc, "kind", text, "");
        c.kind = parse_scenario_kind(text);
    }
    if (doc.contains("source")) {
        const json &s = doc["source"];
        reject_unknown(s, {"mean_photon_number", "rep_rate_hz", "wavelength_nm", "envelope_sigma_mm"}, "source");
        double mean = 0.0;
        read(s, "mean_photon_number", mean, "source.");
        if (mean >= 0.0 && std::isfinite(mean)) {
            c.source.mean_photon_number = MeanPhotonNumber(mean);
        } else {
            out.violations.push_back({Violation::Severity::kError, "source.mean_photon_number",
                                      "mean photon number must be finite and >= 0"});
        }
        read(s, "rep_rate_hz", c.source.rep_rate_hz, "source.");
        read(s, "wavelength_nm", c.source.wavelength_nm, "source.");
        read(s, "envelope_sigma_mm", c.source.envelope_sigma_mm, "source.");
    }
    if (doc.contains("detectors")) {
        const json &ds = doc["detectors"];
        if (!ds.is_array()) {
            throw ConfigError("detectors must be an array");
        }
        for (const auto &d : ds) {
            reject_unknown(d, {"channel", "efficiency", "dark_rate_hz"}, "detectors[]");
            DetectorSpec det;
            read(d, "channel", det.channel, "detectors[].");
            read(d, "efficiency", det.efficiency, "detectors[].");
            read(d, "dark_rate_hz", det.dark_rate_hz, "detectors[].");
            c.detectors.push_back(det);
        }
    }
    if (doc.contains("coincidence")) {
        const json &ps = doc["coincidence"];
        if (!ps.is_array()) {
            throw ConfigError("coincidence must be an array");
        }
        for (const auto &p : ps) {
            reject_unknown(p, {"a", "b", "window_ns", "delay_ns", "label"}, "coincidence[]");
            CoincidenceConfig cc;
            read(p, "a", cc.channel_a, "coincidence[].");
            read(p, "b", cc.channel_b, "coincidence[].");
            read(p, "window_ns", cc.window_ns, "coincidence[].");
            read(p, "delay_ns", cc.electrical_delay_ns, "coincidence[].");
            read(p, "label", cc.label, "coincidence[].");
            c.coincidence.push_back(cc);
        }
    }
    if (doc.contains("visibility")) {
        const json &v = doc["visibility"];
        reject_unknown(v, {"v1", "v2"}, "visibility");
        read(v, "v1", c.vis.v1, "visibility.");
        read(v, "v2", c.vis.v2, "visibility.");
    }
    read(doc, "optical_delay_ns", c.optical_delay_ns, "");
    if (doc.contains("extra_phase_rad") && !doc["extra_phase_rad"].is_null()) {
        double phase = 0.0;
        read(doc, "extra_phase_rad", phase, "");
        c.extra_phase_rad = phase;
    }
    if (doc.contains("glass_plate") && !doc["glass_plate"].is_null()) {
        const json &g = doc["glass_plate"];
        reject_unknown(g, {"thickness_mm", "n_air", "n_glass", "theta_rad"}, "glass_plate");
        GlassPlateSetting plate;
        read(g, "thickness_mm", plate.plate.thickness_mm, "glass_plate.");
        read(g, "n_air", plate.plate.refr_index_air, "glass_plate.");
        read(g, "n_glass", plate.plate.refr_index_glass, "glass_plate.");
        read(g, "theta_rad", plate.theta_rad, "glass_plate.");
        c.glass_plate = plate;
    }
    if (doc.contains("normalization")) {
        read(doc, "normalization", text, "");
        c.normalization = parse_normalization(text);
    }
    if (doc.contains("phase_randomization")) {
        read(doc, "phase_randomization", text, "");
        c.phase_randomization = parse_phase_randomization(text);
    }
    if (doc.contains("grid")) {
        const json &g = doc["grid"];
        reject_unknown(g, {"start_mm", "stop_mm", "step_mm"}, "grid");
        read(g, "start_mm", c.grid.start_mm, "grid.");
        read(g, "stop_mm", c.grid.stop_mm, "grid.");
        read(g, "step_mm", c.grid.step_mm, "grid.");
    }
    return out;
}

json parse_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
    }
}

ScenarioConfig finish(ParseOutcome outcome) {
    for (const auto &v : outcome.violations) {
        if (v.severity == Violation::Severity::kError) {
            throw ConfigError(v.field + ": " + v.message);
        }
    }
    return std::move(outcome.config);
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    return kKindNames.name(kind);
}
std::string_view to_string(RateNormalization n) {
    return kNormalizationNames.name(n);
}
std::string_view to_string(PhaseRandomization p) {
    return kPhaseNames.name(p);
}
ScenarioKind parse_scenario_kind(std::string_view name) {
    return kKindNames.parse(name, "scenario kind");
}
RateNormalization parse_normalization(std::string_view name) {
    return kNormalizationNames.parse(name, "normalization");
}
PhaseRandomization parse_phase_randomization(std::string_view name) {
    return kPhaseNames.parse(name, "phase randomization");
}

double ScenarioConfig::dual_phase() const {
    if (extra_phase_rad) {
        return *extra_phase_rad;
    }
    if (glass_plate) {
        return glass_plate_phase(glass_plate->theta_rad, glass_plate->plate, source.wavelength_nm);
    }
    throw ConfigError("dual interferometer needs extra_phase_rad or glass_plate");
}

const DetectorSpec &ScenarioConfig::detector(int channel) const {
    for (const auto &d : detectors) {
        if (d.channel == channel) {
            return d;
        }
    }
    throw LookupError("no detector on channel " + std::to_string(channel));
}

int port_count(ScenarioKind kind) {
    return kind == ScenarioKind::kDualMzi ? 4 : 2;
}

std::vector<Violation> validate(const ScenarioConfig &c) {
    std::vector<Violation> out;
    auto error = [&](std::string field, std::string message) {
        out.push_back({Violation::Severity::kError, std::move(field), std::move(message)});
    };
    auto warning = [&](std::string field, std::string message) {
        out.push_back({Violation::Severity::kWarning, std::move(field), std::move(message)});
    };
    auto positive = [](double x) {
        return x > 0.0 && std::isfinite(x);
    };

    if (!positive(c.source.rep_rate_hz)) {
        error("source.rep_rate_hz", "repetition rate must be positive");
    }
    if (!positive(c.source.wavelength_nm)) {
        error("source.wavelength_nm", "wavelength must be positive");
    }
    if (!positive(c.source.envelope_sigma_mm)) {
        error("source.envelope_sigma_mm", "envelope width must be positive");
    }
    if (!(c.vis.v1 >= 0.0 && c.vis.v1 <= 1.0)) {
        error("visibility.v1", "visibility must lie in [0, 1]");
    }
    if (!(c.vis.v2 >= 0.0 && c.vis.v2 <= 1.0)) {
        error("visibility.v2", "visibility must lie in [0, 1]");
    }

    int ports = port_count(c.kind);
    std::set<int> channels;
    if (c.detectors.empty()) {
        error("detectors", "at least one detector is required");
    }
    for (const auto &d : c.detectors) {
        std::string field = "detectors[" + std::to_string(d.channel) + "]";
        if (d.channel < 1 || d.channel > ports) {
            error(field + ".channel", "channel must be an output port in 1.." + std::to_string(ports));
        }
        if (!channels.insert(d.channel).second) {
            error(field + ".channel", "duplicate channel");
        }
        if (!(d.efficiency > 0.0 && d.efficiency <= 1.0)) {
            error(field + ".efficiency", "efficiency must lie in (0, 1]");
        }
        if (!(d.dark_rate_hz >= 0.0) || !std::isfinite(d.dark_rate_hz)) {
            error(field + ".dark_rate_hz", "dark rate must be >= 0");
        }
    }

    double period_ns = positive(c.source.rep_rate_hz) ? 1e9 / c.source.rep_rate_hz : 0.0;
    for (size_t i = 0; i < c.coincidence.size(); ++i) {
        const auto &p = c.coincidence[i];
        std::string field = "coincidence[" + std::to_string(i) + "]";
        if (!channels.count(p.channel_a)) {
            error(field + ".a", "channel " + std::to_string(p.channel_a) + " is not declared");
        }
        if (!channels.count(p.channel_b)) {
            error(field + ".b", "channel " + std::to_string(p.channel_b) + " is not declared");
        }
        if (p.channel_a == p.channel_b) {
            error(field, "a coincidence needs two distinct channels");
        }
        if (!positive(p.window_ns)) {
            error(field + ".window_ns", "window must be positive");
        } else if (period_ns > 0.0 && p.window_ns >= period_ns) {
            error(field + ".window_ns", "window must be shorter than the repetition period");
        }
        if (!(p.electrical_delay_ns >= 0.0) || !std::isfinite(p.electrical_delay_ns)) {
            error(field + ".delay_ns", "electrical delay must be >= 0");
        }
        if (c.kind == ScenarioKind::kTemporalSeparated && p.electrical_delay_ns != 0.0 &&
            p.electrical_delay_ns != c.optical_delay_ns) {
            warning(field + ".delay_ns", "delay selects neither the same-pulse nor the cross-pulse pairing");
        }
    }

    if (c.kind == ScenarioKind::kTemporalSeparated) {
        if (!positive(c.optical_delay_ns)) {
            error("optical_delay_ns", "temporal separation requires optical_delay_ns > 0");
        } else if (period_ns > 0.0 && c.optical_delay_ns >= period_ns) {
            error("optical_delay_ns", "both pulses must fit in one repetition period");
        }
    }
    if (c.kind == ScenarioKind::kDualMzi) {
        if (!c.extra_phase_rad && !c.glass_plate) {
            error("extra_phase_rad", "dual interferometer needs extra_phase_rad or glass_plate");
        }
        if (c.extra_phase_rad && !std::isfinite(*c.extra_phase_rad)) {
            error("extra_phase_rad", "extra phase must be finite");
        }
        if (c.glass_plate) {
            try {
                c.glass_plate->plate.validate();
                glass_plate_path_mm(c.glass_plate->theta_rad, c.glass_plate->plate);
            } catch (const std::exception &e) {
                error("glass_plate", e.what());
            }
        }
    }
    if (c.normalization == RateNormalization::kTwoPhoton && !is_single_mzi(c.kind)) {
        error("normalization", "two_photon normalization applies to single-interferometer scenarios only");
    }
    if (!positive(c.grid.step_mm)) {
        error("grid.step_mm", "grid step must be positive");
    } else if (!std::isfinite(c.grid.start_mm) || !std::isfinite(c.grid.stop_mm)) {
        error("grid", "grid bounds must be finite");
    } else if (c.grid.start_mm > c.grid.stop_mm) {
        error("grid", "grid is empty (start > stop)");
    }
    return out;
}

bool has_errors(const std::vector<Violation> &violations) {
    for (const auto &v : violations) {
        if (v.severity == Violation::Severity::kError) {
            return true;
        }
    }
    return false;
}

void require_valid(const ScenarioConfig &config) {
    for (const auto &v : validate(config)) {
        if (v.severity == Violation::Severity::kError) {
            throw ConfigError(v.field + ": " + v.message);
        }
    }
}

const std::vector<std::string> &builtin_names() {
    static const std::vector<std::string> names{"fig3", "fig5", "fig6", "fig8a", "fig8b", "fig8cd", "fig10"};
    return names;
}

ScenarioConfig builtin(std::string_view name) {
    if (name == "fig3") {
        auto c = base_config("fig3", ScenarioKind::kSingleMziStable, 0.01, {1.0, 1.0}, 2);
        c.normalization = RateNormalization::kTwoPhoton;
        c.coincidence.push_back(pair(1, 2, 4.0, 0.0));
        return c;
    }
    if (name == "fig5" || name == "fig6") {
        auto kind = name == "fig5" ? ScenarioKind::kSingleMziStable : ScenarioKind::kSingleMziRandomized;
        auto c = base_config(std::string(name), kind, 0.0305, {0.95, 0.99}, 2);
        c.coincidence.push_back(pair(1, 2, 4.0, 0.0));
        return c;
    }
    if (name == "fig8a") {
        return temporal_builtin("fig8a", 0.0, 4.0);
    }
    if (name == "fig8b") {
        return temporal_builtin("fig8b", 8.0, 4.0);
    }
    if (name == "fig8cd") {
        return temporal_builtin("fig8cd", 0.0, 10.0);
    }
    if (name == "fig10") {
        auto c = base_config("fig10", ScenarioKind::kDualMzi, 0.061, {0.98, 0.98}, 3);
        c.extra_phase_rad = 0.0;
        c.coincidence.push_back(pair(1, 3, 4.0, 0.0));
        c.coincidence.push_back(pair(2, 3, 4.0, 0.0));
        return c;
    }
    throw LookupError("unknown builtin scenario '" + std::string(name) + "'");
}

std::string singles_column_name(int channel) {
    return "nd" + std::to_string(channel) + "_hz";
}

std::string coincidence_column_name(const CoincidenceConfig &pair) {
    return "n" + pair.effective_label() + "_hz";
}

double reference_singles(const ScenarioConfig &config, int channel, double dx_mm) {
    double eta = detector_efficiency(config, channel);
    double far = far_singles(config);
    if (config.kind == ScenarioKind::kSingleMziStable) {
        PortSign port = channel == 1 ? PortSign::kPlus : PortSign::kMinus;
        return eta * singles_fringe(dx_mm, config.source, port, port_visibility(config, channel), 2.0 * far);
    }
    return eta * far;
}

double reference_coincidence(const ScenarioConfig &config, const CoincidenceConfig &pair, double dx_mm) {
    double eta = detector_efficiency(config, pair.channel_a) * detector_efficiency(config, pair.channel_b);
    const SourceSpec &s = config.source;
    switch (config.kind) {
        case ScenarioKind::kSingleMziStable:
        case ScenarioKind::kSingleMziRandomized: {
            if (!pairing_selected(pair, 0.0)) {
                return 0.0;
            }
            double n_max = config.normalization == RateNormalization::kTwoPhoton
                               ? far_rates(s).coincidence_avg_hz
                               : accidental_rate(far_singles(config), far_singles(config), s.rep_rate_hz);
            VisibilityPair vis{config.vis.v1, config.vis.v2};
            if (config.kind == ScenarioKind::kSingleMziStable) {
                return eta * coincidence_fringe(dx_mm, s, vis, n_max);
            }
            return eta * randomized_hom_fringe(dx_mm, s, vis, n_max);
        }
        case ScenarioKind::kTemporalSeparated:
            return eta * temporal_coincidence(config, pair, dx_mm);
        case ScenarioKind::kDualMzi:
            return eta * dual_coincidence(config, pair, dx_mm);
    }
    throw std::logic_error("unknown scenario kind");
}

FringeScan reference_curve(const ScenarioConfig &config, const std::vector<double> &dx_grid) {
    require_valid(config);
    require_valid_grid(dx_grid);
    FringeScan scan;
    scan.scenario = config.name;
    scan.dx_mm = dx_grid;
    for (const auto &d : config.detectors) {
        auto &col = scan.add_column(singles_column_name(d.channel));
        for (size_t i = 0; i < dx_grid.size(); ++i) {
            col.values[i] = reference_singles(config, d.channel, dx_grid[i]);
        }
    }
    for (const auto &p : config.coincidence) {
        auto &col = scan.add_column(coincidence_column_name(p));
        for (size_t i = 0; i < dx_grid.size(); ++i) {
            col.values[i] = reference_coincidence(config, p, dx_grid[i]);
        }
    }
    return scan;
}

ScenarioConfig scenario_from_json(std::string_view text) {
    return finish(parse_document(parse_text(text)));
}

std::vector<Violation> validate_json(std::string_view text) {
    ParseOutcome outcome = parse_document(parse_text(text));
    auto rest = validate(outcome.config);
    outcome.violations.insert(outcome.violations.end(), rest.begin(), rest.end());
    return outcome.violations;
}

std::string scenario_to_json(const ScenarioConfig &config) {
    return config_to_json(config).dump(2);
}

ScenarioConfig apply_json_overrides(const ScenarioConfig &config, std::string_view text) {
    json patch = parse_text(text);
    if (!patch.is_object()) {
        throw ConfigError("scenario override must be a JSON object");
    }
    if (patch.contains("base")) {
        throw ConfigError("'base' is not allowed in an override");
    }
    json merged = config_to_json(config);
    // Arrays (detectors, coincidence) are replaced wholesale.
    merged.merge_patch(patch);
    return finish(parse_document(merged));
}

ScenarioConfig load_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json(buffer.str());
}

}  // namespace wcpi
