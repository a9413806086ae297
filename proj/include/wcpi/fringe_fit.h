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

#ifndef WCPI_FRINGE_FIT_H
#define WCPI_FRINGE_FIT_H

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcpi/fringe_models.h"
#include "wcpi/fringe_scan.h"

namespace wcpi {

/// Fringe shapes the fitter knows, with u = x - x0, k = 2 pi / lambda,
/// g = exp(-u^2 / (2 sigma^2)) and c = cos(k u) g:
///   kOpi      N/2 [1 + s V1 c]              (s = port sign)
///   kTpi      N [1 + (V1 - V2) c - V1 V2 c^2]
///   kHomDip   N [1 - V1 g^2]
///   kHomPeak  N [1 + V1 g^2]
///   kDualMzi  N [1 + V1 exp(-u^2 / (4 sigma^2))]
/// The HOM and dual amplitudes are signed so that a dip fitted with the peak
/// model (or the reverse) comes out negative.
enum class FitKind { kOpi, kTpi, kHomDip, kHomPeak, kDualMzi };

enum class FitParam { kNMax = 0, kV1, kV2, kSigma, kX0, kWavelength };
inline constexpr size_t kFitParamCount = 6;

std::string_view to_string(FitKind kind);
std::string_view to_string(FitParam p);
/// Throws ConfigError on an unknown name.
FitKind parse_fit_kind(std::string_view name);

struct FitParams {
    std::array<double, kFitParamCount> values{};

    double &operator[](FitParam p) {
        return values[static_cast<size_t>(p)];
    }
    double operator[](FitParam p) const {
        return values[static_cast<size_t>(p)];
    }
};

struct FitModel {
    FitKind kind = FitKind::kHomDip;
    PortSign port = PortSign::kPlus;
    double wavelength_nm = 775.0;
    /// Oscillating models keep lambda frozen unless this is set.
    bool fit_wavelength = false;
    /// Parameters held at the given value.
    std::map<FitParam, double> pinned;

    /// Whether a parameter enters the model and is varied.
    bool is_free(FitParam p) const;
    bool uses(FitParam p) const;
};

/// Points to fit. With exposures the values are rates and the variance of
/// each is max(rate * exposure, 1) / exposure^2; without, the values are
/// counts with variance max(y, 1).
struct FitData {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> exposure_s;

    /// Throws LookupError when the column is missing.
    static FitData from_scan(const FringeScan &scan, std::string_view column);
};

struct FitResult {
    FitModel model;
    FitParams params;
    /// Standard errors from the unscaled inverse normal matrix; zero for
    /// frozen parameters, NaN when the matrix is singular.
    FitParams std_error;
    std::vector<std::vector<double>> covariance;  // free parameters only
    std::vector<FitParam> free_params;
    double fwhm_mm = 0.0;
    double rss = 0.0;
    int iterations = 0;
    bool converged = false;
    /// See visibility().
    double visibility = 0.0;
    size_t points = 0;
};

double model_value(const FitModel &model, const FitParams &p, double x);
/// Partial derivatives with respect to every parameter, indexed by FitParam.
std::array<double, kFitParamCount> model_gradient(const FitModel &model, const FitParams &p, double x);

/// Envelope FWHM implied by sigma for a model kind.
double model_fwhm(FitKind kind, double sigma_mm);

/// Starting point read off the data: baseline from the outer 20% of points,
/// x0 at the extreme deviation (ties go to the grid center), sigma from the
/// half width at half deviation, amplitude from deviation over baseline.
FitParams default_init(const FitData &data, const FitModel &model);

/// Weighted Levenberg-Marquardt. Throws InputError on non-finite data or
/// fewer than (free parameters + 2) points; non-convergence is reported in
/// the result.
FitResult fit(const FitData &data, const FitModel &model, std::optional<FitParams> init = std::nullopt);

/// Fringe visibility: (max - min)/(max + min) of the fitted model within one
/// wavelength of x0 for oscillating kinds, the signed fractional deviation at
/// x0 for HOM and dual kinds.
double visibility(const FitResult &result);
/// The same quantity measured straight from data. Throws std::domain_error
/// when the baseline is zero.
double visibility(const FitData &data, FitKind kind);

}  // namespace wcpi

#endif
