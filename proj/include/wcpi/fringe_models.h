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

#ifndef WCPI_FRINGE_MODELS_H
#define WCPI_FRINGE_MODELS_H

#include <string_view>

#include "wcpi/photon_stats.h"

namespace wcpi {

/// A path-length difference of this many envelope widths counts as "far
/// outside the coherence length" (envelope below 1e-7).
inline constexpr double kFarFieldSigmas = 6.0;

/// Pulsed weak-coherent source feeding the interferometer.
struct SourceSpec {
    MeanPhotonNumber mean_photon_number;
    double rep_rate_hz = 20e6;
    double wavelength_nm = 775.0;
    /// Gaussian width of the one-photon fringe envelope.
    double envelope_sigma_mm = 0.35;

    /// Throws ConfigError on a nonpositive rate, wavelength or width.
    void validate() const;

    double mean() const {
        return mean_photon_number.value();
    }
};

/// One-photon fringe visibilities seen at the two output ports.
struct VisibilityPair {
    double v1 = 1.0;
    double v2 = 1.0;

    void validate() const;
};

/// Amplitude split of a two-photon component inside a balanced MZI: both
/// photons in one arm (the N00N-like part, phase order 2) or one per arm.
struct TwoPhotonDecomposition {
    double p_noon = 0.0;
    double p_split = 0.0;
    int relative_phase_order = 2;
};

struct GlassPlateSpec {
    double thickness_mm = 0.2;
    double refr_index_air = 1.0;
    double refr_index_glass = 1.5;

    void validate() const;
};

enum class PortSign : int { kPlus = 1, kMinus = -1 };

enum class TemporalCase { kSamePulse, kCrossPulse, kWideWindow };

enum class DualPair { kD1D3, kD2D3 };

TemporalCase parse_temporal_case(std::string_view name);
std::string_view to_string(TemporalCase c);

/// Far-field (no interference) rates.
struct FarRates {
    double singles_avg_hz = 0.0;       // (P(1)+P(2))/2 * f
    double coincidence_avg_hz = 0.0;   // P(2)/2 * f
    double singles_max_hz = 0.0;       // 2 * singles_avg_hz
    double two_photon_singles_max_hz = 0.0;  // P(2) * f, the ceiling of the two-photon-only picture
};

/// Relative arm phase 2*pi*dx/lambda.
double arm_phase(double dx_mm, double wavelength_nm);

/// exp(-dx^2 / (2 sigma^2)): the one-photon fringe envelope.
double fringe_envelope(double dx_mm, double sigma_mm);

/// Full width at half maximum of exp(-x^2/(2 sigma^2)).
double fwhm_one_photon(double sigma_mm);
/// Full width at half maximum of the squared envelope exp(-x^2/sigma^2).
double fwhm_two_photon(double sigma_mm);
/// Full width at half maximum of exp(-x^2/(4 sigma^2)).
double fwhm_dual_mzi(double sigma_mm);

/// Singles rate at one output port: N_max/2 * [1 +- V cos(phi) envelope].
/// `phase_offset` is added to the arm phase.
double singles_fringe(double dx_mm, const SourceSpec &source, PortSign port, double visibility, double n_max_rate,
                      double phase_offset = 0.0);

/// Two-fold coincidence rate with unequal port visibilities; the expansion of
/// (1 + V1 c)(1 - V2 c) with c = cos(phi) * envelope.
double coincidence_fringe(double dx_mm, const SourceSpec &source, VisibilityPair vis, double n_max_rate,
                          double phase_offset = 0.0);

struct CoincidenceComponents {
    double noon_part_hz = 0.0;
    double hom_part_hz = 0.0;
};

/// Splits the ideal-visibility coincidence fringe into the 2*phi oscillating
/// path-correlated part and the phase-insensitive HOM part.
CoincidenceComponents coincidence_fringe_components(double dx_mm, const SourceSpec &source, double n_max_rate);

/// Phase-averaged coincidence fringe (randomized interferometer arm).
double randomized_hom_fringe(double dx_mm, const SourceSpec &source, VisibilityPair vis, double n_max_rate);

FarRates far_rates(const SourceSpec &source);

TwoPhotonDecomposition decompose_two_photon();

/// Far-field coincidence rate for two orthogonally polarized pulses sharing
/// one repetition period, each carrying <n>/2.
double temporal_rates(const SourceSpec &source, TemporalCase which);

/// Coincidence fringe for the temporally separated pulse pair. The same-pulse
/// selection dips, the cross-pulse selection peaks, the wide window is flat.
double temporal_fringe(double dx_mm, const SourceSpec &source, TemporalCase which, VisibilityPair vis = {});

/// Coincidences between outputs of two phase-synchronized MZIs with an extra
/// phase `dphi` in one arm. The total path difference is split equally
/// between the interferometers.
double dual_mzi_fringe(double dx_total_mm, double dphi, DualPair pair, VisibilityPair vis, double baseline_hz,
                       const SourceSpec &source);
double dual_mzi_fringe(double dx_total_mm, double dphi, DualPair pair, double vis, double baseline_hz,
                       const SourceSpec &source);

/// Geometric path d = t / cos(asin(n0 sin(theta) / n)) through a tilted plate.
double glass_plate_path_mm(double theta_rad, const GlassPlateSpec &plate);

/// Extra phase (2 pi / lambda)(d - t) from tilting the plate by theta.
double glass_plate_phase(double theta_rad, const GlassPlateSpec &plate, double wavelength_nm);

}  // namespace wcpi

#endif
