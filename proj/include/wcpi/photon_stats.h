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

#ifndef WCPI_PHOTON_STATS_H
#define WCPI_PHOTON_STATS_H

#include <cstdint>
#include <vector>

#include "wcpi/rng.h"

namespace wcpi {

/// Mean photon number <n> = |alpha|^2 of a coherent pulse. Always finite and
/// nonnegative; the constructor throws std::domain_error otherwise.
class MeanPhotonNumber {
   public:
    constexpr MeanPhotonNumber() = default;
    explicit MeanPhotonNumber(double value);

    constexpr double value() const {
        return value_;
    }

   private:
    double value_ = 0.0;
};

/// Poisson probability of exactly n photons. Evaluated directly for n <= 20
/// and in log space above that.
double poisson_pmf(int n, MeanPhotonNumber mean);

/// P(n)/P(n+1) = (n+1)/<n>. Throws std::domain_error for a zero mean.
double pmf_ratio(int n, MeanPhotonNumber mean);

/// Probability of n1 photons in one pulse and n2 in an independent second.
double joint_pmf(int n1, int n2, MeanPhotonNumber mean1, MeanPhotonNumber mean2);

/// Smallest truncation that keeps the neglected tail below `tail_tolerance`.
/// Means up to 0.1 always get 10.
int default_truncation(MeanPhotonNumber mean, double tail_tolerance = 1e-15);

/// Probability mass beyond n_max, summed directly (not as 1 - sum).
double poisson_tail(int n_max, MeanPhotonNumber mean);

/// A truncated photon-number distribution, pmf indexed by n in [0, n_max].
struct PhotonNumberDistribution {
    MeanPhotonNumber mean;
    std::vector<double> pmf;
    double tail_mass = 0.0;

    int n_max() const {
        return static_cast<int>(pmf.size()) - 1;
    }

    /// Throws std::domain_error if n_max < 2 or the tail exceeds tolerance.
    static PhotonNumberDistribution truncated(MeanPhotonNumber mean, int n_max, double tail_tolerance = 1e-12);
    static PhotonNumberDistribution truncated(MeanPhotonNumber mean);
};

/// Draws a photon number from Poisson(<n>). Sequential-search inversion
/// below <n> = 10.
uint32_t sample_photon_number(MeanPhotonNumber mean, Rng &rng);

}  // namespace wcpi

#endif
