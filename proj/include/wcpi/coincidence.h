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

#ifndef WCPI_COINCIDENCE_H
#define WCPI_COINCIDENCE_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wcpi {

/// Click times of one detector channel, integer picoseconds since run start,
/// nondecreasing.
using TagStream = std::vector<int64_t>;

/// Tag streams keyed by detector channel id.
using ChannelStreams = std::map<int, TagStream>;

/// A two-fold coincidence selection. A click pair (t_a, t_b) is counted when
/// |t_b - t_a - electrical_delay| <= window, i.e. `window_ns` is the largest
/// accepted separation from the delayed partner.
struct CoincidenceConfig {
    int channel_a = 1;
    int channel_b = 2;
    double window_ns = 4.0;
    double electrical_delay_ns = 0.0;
    /// Column label; defaults to "d<a>d<b>".
    std::string label;

    std::string effective_label() const;
};

struct CoincidenceResult {
    std::string label;
    uint64_t pair_count = 0;
    double duration_s = 0.0;
    double rate_hz = 0.0;
};

int64_t ns_to_ps(double ns);

/// Streaming greedy coincidence counter: single pass, each tag used at most
/// once, earliest partner first. Without `duration_s` the run is taken to
/// span [0, last tag of either stream]. Throws InputError on unordered
/// streams and std::domain_error on a nonpositive window.
CoincidenceResult count_coincidences(std::span<const int64_t> stream_a, std::span<const int64_t> stream_b,
                                     const CoincidenceConfig &cfg, std::optional<double> duration_s = std::nullopt);

/// Accidental coincidences of independent pulsed singles: N1 N2 / f.
double accidental_rate(double singles_a_hz, double singles_b_hz, double rep_rate_hz);

/// Applies count_coincidences to each configured pair over one shared run.
/// Missing channels count as empty streams.
std::vector<CoincidenceResult> multi_pair_count(const ChannelStreams &streams,
                                                std::span<const CoincidenceConfig> cfgs,
                                                std::optional<double> duration_s = std::nullopt);

}  // namespace wcpi

#endif
