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

#include "wcpi/coincidence.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wcpi/errors.h"

namespace wcpi {

std::string CoincidenceConfig::effective_label() const {
    if (!label.empty()) {
        return label;
    }
    return "d" + std::to_string(channel_a) + "d" + std::to_string(channel_b);
}

int64_t ns_to_ps(double ns) {
    return static_cast<int64_t>(std::llround(ns * 1000.0));
}

CoincidenceResult count_coincidences(std::span<const int64_t> stream_a, std::span<const int64_t> stream_b,
                                     const CoincidenceConfig &cfg, std::optional<double> duration_s) {
    if (!(cfg.window_ns > 0.0) || !std::isfinite(cfg.window_ns)) {
        throw std::domain_error("coincidence window must be positive");
    }
    if (!std::isfinite(cfg.electrical_delay_ns)) {
        throw std::domain_error("electrical delay must be finite");
    }
    if (!std::is_sorted(stream_a.begin(), stream_a.end()) || !std::is_sorted(stream_b.begin(), stream_b.end())) {
        throw InputError("tag streams must be in nondecreasing time order");
    }

    const int64_t window = ns_to_ps(cfg.window_ns);
    const int64_t delay = ns_to_ps(cfg.electrical_delay_ns);

    // The acceptance interval [t_a + delay - window, t_a + delay + window]
    // only moves right as t_a grows, so any b left behind is dead for good.
    uint64_t pairs = 0;
    size_t j = 0;
    for (int64_t t_a : stream_a) {
        const int64_t lo = t_a + delay - window;
        const int64_t hi = t_a + delay + window;
        while (j < stream_b.size() && stream_b[j] < lo) {
            ++j;
        }
        if (j < stream_b.size() && stream_b[j] <= hi) {
            ++pairs;
            ++j;
        }
    }

    CoincidenceResult result;
    result.label = cfg.effective_label();
    result.pair_count = pairs;
    if (duration_s) {
        result.duration_s = *duration_s;
    } else {
        int64_t last = 0;
        if (!stream_a.empty()) {
            last = std::max(last, stream_a.back());
        }
        if (!stream_b.empty()) {
            last = std::max(last, stream_b.back());
        }
        result.duration_s = static_cast<double>(last) * 1e-12;
    }
    result.rate_hz = result.duration_s > 0.0 ? static_cast<double>(pairs) / result.duration_s : 0.0;
    return result;
}

double accidental_rate(double singles_a_hz, double singles_b_hz, double rep_rate_hz) {
    if (rep_rate_hz == 0.0) {
        throw std::domain_error("accidental rate needs a nonzero repetition rate");
    }
    if (singles_a_hz < 0.0 || singles_b_hz < 0.0 || rep_rate_hz < 0.0) {
        throw std::domain_error("rates must be nonnegative");
    }
    return singles_a_hz * singles_b_hz / rep_rate_hz;
}

std::vector<CoincidenceResult> multi_pair_count(const ChannelStreams &streams,
                                                std::span<const CoincidenceConfig> cfgs,
                                                std::optional<double> duration_s) {
    static const TagStream kEmpty;
    auto lookup = [&](int channel) -> const TagStream & {
        auto it = streams.find(channel);
        return it == streams.end() ? kEmpty : it->second;
    };
    if (!duration_s) {
        int64_t last = 0;
        for (const auto &[channel, tags] : streams) {
            if (!tags.empty()) {
                last = std::max(last, tags.back());
            }
        }
        duration_s = static_cast<double>(last) * 1e-12;
    }
    std::vector<CoincidenceResult> results;
    results.reserve(cfgs.size());
    for (const auto &cfg : cfgs) {
        results.push_back(count_coincidences(lookup(cfg.channel_a), lookup(cfg.channel_b), cfg, duration_s));
    }
    return results;
}

}  // namespace wcpi
