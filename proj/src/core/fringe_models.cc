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

#include "wcpi/fringe_models.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wcpi/errors.h"

namespace wcpi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unit_interval(double v, const char *what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace

void SourceSpec::validate() const {
    if (!(rep_rate_hz > 0.0) || !std::isfinite(rep_rate_hz)) {
        throw ConfigError("rep_rate_hz must be positive");
    }
    if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
        throw ConfigError("wavelength_nm must be positive");
    }
    if (!(envelope_sigma_mm > 0.0) || !std::isfinite(envelope_sigma_mm)) {
        throw ConfigError("envelope_sigma_mm must be positive");
    }
}

void VisibilityPair::validate() const {
    require_unit_interval(v1, "visibility v1");
    require_unit_interval(v2, "visibility v2");
}

void GlassPlateSpec::validate() const {
    if (!(thickness_mm > 0.0)) {
        throw ConfigError("glass plate thickness must be positive");
    }
    if (!(refr_index_air >= 1.0) || !(refr_index_glass >= refr_index_air)) {
        throw ConfigError("glass plate needs refr_index_glass >= refr_index_air >= 1");
    }
}

TemporalCase parse_temporal_case(std::string_view name) {
    if (name == "same_pulse") {
        return TemporalCase::kSamePulse;
    }
    if (name == "cross_pulse") {
        return TemporalCase::kCrossPulse;
    }
    if (name == "wide_window") {
        return TemporalCase::kWideWindow;
    }
    throw std::domain_error("unknown temporal case '" + std::string(name) + "'");
}

std::string_view to_string(TemporalCase c) {
    switch (c) {
        case TemporalCase::kSamePulse:
            return "same_pulse";
        case TemporalCase::kCrossPulse:
            return "cross_pulse";
        case TemporalCase::kWideWindow:
            return "wide_window";
    }
    throw std::domain_error("unknown temporal case");
}

double arm_phase(double dx_mm, double wavelength_nm) {
    return kTwoPi * dx_mm / (wavelength_nm * 1e-6);
}

double fringe_envelope(double dx_mm, double sigma_mm) {
    return std::exp(-0.5 * dx_mm * dx_mm / (sigma_mm * sigma_mm));
}

double fwhm_one_photon(double sigma_mm) {
    return 2.0 * sigma_mm * std::sqrt(2.0 * std::numbers::ln2);
}

double fwhm_two_photon(double sigma_mm) {
    return 2.0 * sigma_mm * std::sqrt(std::numbers::ln2);
}

double fwhm_dual_mzi(double sigma_mm) {
    return 4.0 * sigma_mm * std::sqrt(std::numbers::ln2);
}

double singles_fringe(double dx_mm, const SourceSpec &source, PortSign port, double visibility, double n_max_rate,
                      double phase_offset) {
    double phi = arm_phase(dx_mm, source.wavelength_nm) + phase_offset;
    double sign = static_cast<int>(port);
    double g = fringe_envelope(dx_mm, source.envelope_sigma_mm);
    return 0.5 * n_max_rate * (1.0 + sign * visibility * std::cos(phi) * g);
}

double coincidence_fringe(double dx_mm, const SourceSpec &source, VisibilityPair vis, double n_max_rate,
                          double phase_offset) {
    double phi = arm_phase(dx_mm, source.wavelength_nm) + phase_offset;
    double g = fringe_envelope(dx_mm, source.envelope_sigma_mm);
    double first_order = (vis.v1 - vis.v2) * std::cos(phi) * g;
    double second_order = 0.5 * vis.v1 * vis.v2 * (1.0 + std::cos(2.0 * phi)) * g * g;
    return n_max_rate * (1.0 + first_order - second_order);
}

CoincidenceComponents coincidence_fringe_components(double dx_mm, const SourceSpec &source, double n_max_rate) {
    double phi = arm_phase(dx_mm, source.wavelength_nm);
    double g2 = std::pow(fringe_envelope(dx_mm, source.envelope_sigma_mm), 2);
    return {
        .noon_part_hz = 0.5 * n_max_rate * (1.0 - std::cos(2.0 * phi) * g2),
        .hom_part_hz = 0.5 * n_max_rate * (1.0 - g2),
    };
}

double randomized_hom_fringe(double dx_mm, const SourceSpec &source, VisibilityPair vis, double n_max_rate) {
    // Uniform phase: <cos(phi)> = 0 and <1 + cos(2 phi)> = 1, applied term by
    // term to the fixed-phase expansion.
    constexpr double mean_cos = 0.0;
    constexpr double mean_one_plus_cos2 = 1.0;
    double g = fringe_envelope(dx_mm, source.envelope_sigma_mm);
    double first_order = (vis.v1 - vis.v2) * mean_cos * g;
    double second_order = 0.5 * vis.v1 * vis.v2 * mean_one_plus_cos2 * g * g;
    return n_max_rate * (1.0 + first_order - second_order);
}

FarRates far_rates(const SourceSpec &source) {
    double n = source.mean();
    double f = source.rep_rate_hz;
    FarRates rates;
    rates.coincidence_avg_hz = 0.25 * n * n * std::exp(-n) * f;
    rates.singles_avg_hz = 0.25 * (2.0 * n + n * n) * std::exp(-n) * f;
    rates.singles_max_hz = 2.0 * rates.singles_avg_hz;
    rates.two_photon_singles_max_hz = poisson_pmf(2, source.mean_photon_number) * f;
    return rates;
}

TwoPhotonDecomposition decompose_two_photon() {
    // Amplitudes 1/2 (|2,0>), 1/2 (|0,2>) and 1/sqrt(2) (|1,1>).
    constexpr double a_20 = 0.5;
    constexpr double a_02 = 0.5;
    const double a_11 = 1.0 / std::numbers::sqrt2;
    return {
        .p_noon = a_20 * a_20 + a_02 * a_02,
        .p_split = a_11 * a_11,
        .relative_phase_order = 2,
    };
}

double temporal_rates(const SourceSpec &source, TemporalCase which) {
    MeanPhotonNumber half{source.mean() / 2.0};
    double f = source.rep_rate_hz;
    double p1 = poisson_pmf(1, half);
    double p2 = poisson_pmf(2, half);
    switch (which) {
        case TemporalCase::kSamePulse:
            return p2 / 2.0 * 2.0 * f;
        case TemporalCase::kCrossPulse:
            return p1 * p1 / 4.0 * f;
        case TemporalCase::kWideWindow:
            return 2.0 * p2 * f;
    }
    throw std::domain_error("unknown temporal case");
}

double temporal_fringe(double dx_mm, const SourceSpec &source, TemporalCase which, VisibilityPair vis) {
    double baseline = temporal_rates(source, which);
    double g = fringe_envelope(dx_mm, source.envelope_sigma_mm);
    double depth = 0.5 * vis.v1 * vis.v2 * g * g;
    switch (which) {
        case TemporalCase::kSamePulse:
            return baseline * (1.0 - depth);
        case TemporalCase::kCrossPulse:
            return baseline * (1.0 + depth);
        case TemporalCase::kWideWindow:
            return baseline;
    }
    throw std::domain_error("unknown temporal case");
}

double dual_mzi_fringe(double dx_total_mm, double dphi, DualPair pair, VisibilityPair vis, double baseline_hz,
                       const SourceSpec &source) {
    // Each interferometer carries dx/2; the cross term is the product of the
    // two one-photon envelopes.
    double half = 0.5 * dx_total_mm;
    double envelope = std::pow(fringe_envelope(half, source.envelope_sigma_mm), 2);
    double sign = pair == DualPair::kD1D3 ? 1.0 : -1.0;
    return baseline_hz * (1.0 + sign * 0.5 * vis.v1 * vis.v2 * std::cos(dphi) * envelope);
}

double dual_mzi_fringe(double dx_total_mm, double dphi, DualPair pair, double vis, double baseline_hz,
                       const SourceSpec &source) {
    return dual_mzi_fringe(dx_total_mm, dphi, pair, VisibilityPair{vis, vis}, baseline_hz, source);
}

double glass_plate_path_mm(double theta_rad, const GlassPlateSpec &plate) {
    double s = plate.refr_index_air * std::sin(theta_rad) / plate.refr_index_glass;
    if (!(std::abs(s) <= 1.0)) {
        throw std::domain_error("refraction angle undefined: |n0 sin(theta) / n| > 1");
    }
    return plate.thickness_mm / std::cos(std::asin(s));
}

double glass_plate_phase(double theta_rad, const GlassPlateSpec &plate, double wavelength_nm) {
    double d = glass_plate_path_mm(theta_rad, plate);
    return kTwoPi / (wavelength_nm * 1e-6) * (d - plate.thickness_mm);
}

}  // namespace wcpi
