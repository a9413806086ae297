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

#include "wcpi/photon_stats.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace wcpi {

namespace {

constexpr int kDirectEvaluationLimit = 20;
constexpr double kInversionLimit = 10.0;

void require_count(int n) {
    if (n < 0) {
        throw std::domain_error("photon number must be nonnegative, got " + std::to_string(n));
    }
}

}  // namespace

MeanPhotonNumber::MeanPhotonNumber(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::domain_error("mean photon number must be finite and >= 0, got " + std::to_string(value));
    }
}

double poisson_pmf(int n, MeanPhotonNumber mean) {
    require_count(n);
    double mu = mean.value();
    if (mu == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    if (n <= kDirectEvaluationLimit) {
        double term = std::exp(-mu);
        for (int k = 1; k <= n; ++k) {
            term *= mu / k;
        }
        return term;
    }
    return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

double pmf_ratio(int n, MeanPhotonNumber mean) {
    require_count(n);
    if (mean.value() == 0.0) {
        throw std::domain_error("P(n)/P(n+1) diverges at zero mean photon number");
    }
    return (n + 1.0) / mean.value();
}

double joint_pmf(int n1, int n2, MeanPhotonNumber mean1, MeanPhotonNumber mean2) {
    return poisson_pmf(n1, mean1) * poisson_pmf(n2, mean2);
}

double poisson_tail(int n_max, MeanPhotonNumber mean) {
    require_count(n_max);
    if (mean.value() == 0.0) {
        return 0.0;
    }
    // Terms past the mode shrink geometrically; stop once they stop mattering.
    double sum = 0.0;
    for (int n = n_max + 1;; ++n) {
        double term = poisson_pmf(n, mean);
        sum += term;
        if (n > mean.value() && term <= sum * 1e-17) {
            break;
        }
        if (term == 0.0 && n > mean.value()) {
            break;
        }
    }
    return sum;
}

int default_truncation(MeanPhotonNumber mean, double tail_tolerance) {
    if (mean.value() <= 0.1) {
        return 10;
    }
    int n_max = std::max(2, static_cast<int>(std::ceil(mean.value())));
    while (poisson_tail(n_max, mean) > tail_tolerance) {
        ++n_max;
    }
    return n_max;
}

PhotonNumberDistribution PhotonNumberDistribution::truncated(MeanPhotonNumber mean, int n_max, double tail_tolerance) {
    if (n_max < 2) {
        throw std::domain_error("photon-number truncation must be >= 2");
    }
    PhotonNumberDistribution dist;
    dist.mean = mean;
    dist.pmf.reserve(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        dist.pmf.push_back(poisson_pmf(n, mean));
    }
    dist.tail_mass = poisson_tail(n_max, mean);
    if (dist.tail_mass > tail_tolerance) {
        throw std::domain_error("truncation at n_max=" + std::to_string(n_max) + " leaves tail mass " +
                                std::to_string(dist.tail_mass));
    }
    return dist;
}

PhotonNumberDistribution PhotonNumberDistribution::truncated(MeanPhotonNumber mean) {
    return truncated(mean, default_truncation(mean));
}

uint32_t sample_photon_number(MeanPhotonNumber mean, Rng &rng) {
    double mu = mean.value();
    if (mu == 0.0) {
        return 0;
    }
    if (mu < kInversionLimit) {
        double u = rng.uniform();
        double p = std::exp(-mu);
        double cdf = p;
        uint32_t n = 0;
        while (u >= cdf) {
            ++n;
            p *= mu / n;
            double next = cdf + p;
            if (next == cdf) {
                break;  // u sits in the rounding gap below 1
            }
            cdf = next;
        }
        return n;
    }
    std::poisson_distribution<uint32_t> dist(mu);
    return dist(rng.engine());
}

}  // namespace wcpi
