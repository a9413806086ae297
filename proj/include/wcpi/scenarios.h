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

#ifndef WCPI_SCENARIOS_H
#define WCPI_SCENARIOS_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcpi/coincidence.h"
#include "wcpi/detector.h"
#include "wcpi/fringe_models.h"
#include "wcpi/fringe_scan.h"

namespace wcpi {

enum class ScenarioKind {
    kSingleMziStable,
    kSingleMziRandomized,
    kTemporalSeparated,
    kDualMzi,
};

/// How the absolute coincidence scale of a reference curve is set.
/// kAccidental: N1 * N2 / f from the far singles of the two detectors.
/// kTwoPhoton: P(2)/2 * f, counting only the two-photon component.
enum class RateNormalization { kAccidental, kTwoPhoton };

/// Whether a randomized phase is shared by both pulses of a period or drawn
/// afresh for every slot.
enum class PhaseRandomization { kPerPeriod, kPerSlot };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(RateNormalization n);
std::string_view to_string(PhaseRandomization p);
/// Throw ConfigError on unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);
RateNormalization parse_normalization(std::string_view name);
PhaseRandomization parse_phase_randomization(std::string_view name);

struct GridSpec {
    double start_mm = -2.1;
    double stop_mm = 2.1;
    double step_mm = 0.002;

    std::vector<double> points() const {
        return make_grid(start_mm, stop_mm, step_mm);
    }
};

struct GlassPlateSetting {
    GlassPlateSpec plate;
    double theta_rad = 0.0;
};

struct ScenarioConfig {
    std::string name;
    ScenarioKind kind = ScenarioKind::kSingleMziStable;
    SourceSpec source;
    std::vector<DetectorSpec> detectors;
    std::vector<CoincidenceConfig> coincidence;
    VisibilityPair vis;
    /// Delay between the two orthogonally polarized pulses (temporal kind).
    double optical_delay_ns = 0.0;
    /// Phase added to one arm of the second interferometer (dual kind). Takes
    /// precedence over the glass plate when both are given.
    std::optional<double> extra_phase_rad;
    std::optional<GlassPlateSetting> glass_plate;
    RateNormalization normalization = RateNormalization::kAccidental;
    PhaseRandomization phase_randomization = PhaseRandomization::kPerPeriod;
    GridSpec grid;

    bool randomized() const {
        return kind != ScenarioKind::kSingleMziStable;
    }

    /// Extra phase of the dual topology, from extra_phase_rad or the plate.
    double dual_phase() const;

    /// Throws LookupError for an undeclared channel.
    const DetectorSpec &detector(int channel) const;
};

struct Violation {
    enum class Severity { kError, kWarning };
    Severity severity = Severity::kError;
    std::string field;
    std::string message;
};

/// Returns every rule the config breaks. Empty means valid; warnings alone do
/// not make a config unusable.
std::vector<Violation> validate(const ScenarioConfig &config);
bool has_errors(const std::vector<Violation> &violations);
/// Throws ConfigError carrying the first error, if any.
void require_valid(const ScenarioConfig &config);

/// Output ports that exist for a topology (1-2 for a single interferometer,
/// 1-4 for the dual one).
int port_count(ScenarioKind kind);

const std::vector<std::string> &builtin_names();
/// Throws LookupError for an unknown name.
ScenarioConfig builtin(std::string_view name);

/// Analytic singles (nd<ch>_hz) and coincidence (n<label>_hz) columns.
FringeScan reference_curve(const ScenarioConfig &config, const std::vector<double> &dx_grid);

/// Analytic coincidence rate for one configured pair at one grid point.
double reference_coincidence(const ScenarioConfig &config, const CoincidenceConfig &pair, double dx_mm);
double reference_singles(const ScenarioConfig &config, int channel, double dx_mm);

std::string singles_column_name(int channel);
std::string coincidence_column_name(const CoincidenceConfig &pair);

/// JSON scenario documents. Unknown fields are rejected with ConfigError. A
/// document may name a builtin in "base" and override some of its fields.
ScenarioConfig scenario_from_json(std::string_view text);
/// Parses like scenario_from_json but reports range problems (such as a
/// negative mean photon number) as violations instead of throwing. Malformed
/// JSON and unknown fields still throw ConfigError.
std::vector<Violation> validate_json(std::string_view text);
std::string scenario_to_json(const ScenarioConfig &config);
/// Merges a JSON object into an existing config; fields present replace the
/// current ones.
ScenarioConfig apply_json_overrides(const ScenarioConfig &config, std::string_view text);
ScenarioConfig load_scenario_file(const std::string &path);

}  // namespace wcpi

#endif
