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

#ifndef WCPI_DETECTOR_H
#define WCPI_DETECTOR_H

namespace wcpi {

/// Threshold (non-photon-number-resolving) single-photon detector.
struct DetectorSpec {
    int channel = 1;
    double efficiency = 1.0;
    double dark_rate_hz = 0.0;

    /// Throws ConfigError unless efficiency is in (0, 1] and dark_rate >= 0.
    void validate() const;
};

/// Probability of at least one registered photon from a coherent field with
/// `mu` expected photons: 1 - exp(-efficiency * mu).
double click_probability(double mu, const DetectorSpec &det);

}  // namespace wcpi

#endif
