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

#ifndef WCPI_MC_ENGINE_H
#define WCPI_MC_ENGINE_H

#include <cstdint>
#include <vector>

#include "wcpi/coincidence.h"
#include "wcpi/fringe_scan.h"
#include "wcpi/rng.h"
#include "wcpi/scenarios.h"

namespace wcpi {

enum class Slot : uint8_t { kEarly = 0, kLate = 1 };

/// One slot of one repetition period as seen by the declared detectors
/// (indexed in declaration order).
struct PulseEvent {
    int64_t period_index = 0;
    Slot slot = Slot::kEarly;
    std::vector<double> mu;
    std::vector<bool> clicks;
};

struct TimeTag {
    int channel = 0;
    int64_t time_ps = 0;
};

/// Outcome of simulating one grid point.
struct PointResult {
    double dx_mm = 0.0;
    uint64_t pulses = 0;
    double duration_s = 0.0;
    /// Declared detector channels; singles[i] counts clicks of channels[i]
    /// including dark counts.
    std::vector<int> channels;
    std::vector<uint64_t> singles;
    ChannelStreams tags;
    /// Counts of (period, slot) events by the set of detectors that clicked,
    /// bit i standing for channels[i]. Dark counts are not included.
    std::vector<uint64_t> click_table;
    /// Photon-level engine only: slots that held exactly two photons, and how
    /// many of those had both photons in the same interferometer arm.
    uint64_t two_photon_events = 0;
    uint64_t same_arm_events = 0;
};

/// Intensity model: every (slot, detector) sees a coherent field with mean
/// photon number mu = a + b cos(phi + theta) and clicks with probability
/// 1 - exp(-eta mu). Randomized scenarios draw phi uniformly per period
/// (or per slot). Deterministic for fixed arguments; the random stream is
/// derived from (seed, dx_mm).
PointResult simulate_point(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed);

/// Photon-granular oracle: draws the photon number of each slot, routes
/// every photon to an output port with probability mu_d / <n_slot> and
/// applies the detector efficiency. Requires <n> <= 0.1.
PointResult photon_level_point(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed);

/// Straightforward per-pulse rendition of the intensity model, one Bernoulli
/// draw per (slot, detector). Slow; kept as a test reference.
std::vector<PulseEvent> trace_pulses(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed);

/// Expected photon numbers at the declared detectors for a given phase, in
/// declaration order, one vector per slot.
std::vector<std::vector<double>> port_intensities(const ScenarioConfig &config, double dx_mm, double phi);

enum class McEngine { kIntensity, kPhotonLevel };

struct SweepOptions {
    uint64_t pulses_per_point = 1000000;
    RngSeed seed{1};
    /// 0 picks the hardware concurrency.
    unsigned workers = 0;
    McEngine engine = McEngine::kIntensity;
};

/// Runs one point per grid value and aggregates singles and coincidence
/// rates into a scan with the same column names as reference_curve, plus
/// exposure_s. Output is independent of the worker count.
FringeScan sweep(const ScenarioConfig &config, const std::vector<double> &dx_grid, const SweepOptions &options);

/// Coincidence counts of the configured pairs for one simulated point.
std::vector<CoincidenceResult> point_coincidences(const ScenarioConfig &config, const PointResult &point);

/// All tags of a point merged and sorted by time (ties by channel).
std::vector<TimeTag> merged_tags(const PointResult &point);

}  // namespace wcpi

#endif
