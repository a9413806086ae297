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

#include "wcpi/detector.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wcpi/errors.h"

namespace wcpi {

void DetectorSpec::validate() const {
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw ConfigError("detector " + std::to_string(channel) + ": efficiency must lie in (0, 1]");
    }
    if (!(dark_rate_hz >= 0.0) || !std::isfinite(dark_rate_hz)) {
        throw ConfigError("detector " + std::to_string(channel) + ": dark rate must be >= 0");
    }
}

double click_probability(double mu, const DetectorSpec &det) {
    if (!(mu >= 0.0)) {
        throw std::domain_error("expected photon number must be >= 0");
    }
    return -std::expm1(-det.efficiency * mu);
}

}  // namespace wcpi
