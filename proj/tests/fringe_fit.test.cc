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

#include "wcpi/fringe_fit.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "wcpi/errors.h"

using namespace wcpi;

namespace {

constexpr FitKind kAllKinds[] = {FitKind::kOpi, FitKind::kTpi, FitKind::kHomDip, FitKind::kHomPeak,
                                 FitKind::kDualMzi};

bool oscillates(FitKind k) {
    return k == FitKind::kOpi || k == FitKind::kTpi;
}

/// Independent transcription of the fit model formulas.
double oracle(FitKind kind, int port, const FitParams &p, double x) {
    double u = x - p[FitParam::kX0];
    double s = p[FitParam::kSigma];
    double k = 2 * M_PI / (p[FitParam::kWavelength] * 1e-6);
    double c = std::cos(k * u) * std::exp(-u * u / (2 * s * s));
    double n = p[FitParam::kNMax];
    double v1 = p[FitParam::kV1];
    double v2 = p[FitParam::kV2];
    double g2 = std::exp(-u * u / (s * s));
    switch (kind) {
        case FitKind::kOpi:
            return n / 2 * (1 + port * v1 * c);
        case FitKind::kTpi:
            return n * (1 + v1 * c) * (1 - v2 * c);
        case FitKind::kHomDip:
            return n * (1 - v1 * g2);
        case FitKind::kHomPeak:
            return n * (1 + v1 * g2);
        case FitKind::kDualMzi:
            return n * (1 + v1 * std::exp(-u * u / (4 * s * s)));
    }
    return 0;
}

struct Case {
    FitModel model;
    FitParams truth;
    FitData data;
};

Case random_case(FitKind kind, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> unit(0, 1);
    Case c;
    c.model.kind = kind;
    c.model.port = unit(rng) < 0.5 ? PortSign::kPlus : PortSign::kMinus;
    FitParams &p = c.truth;
    p[FitParam::kNMax] = 100 + 1e5 * unit(rng);
    p[FitParam::kV1] = 0.3 + 0.65 * unit(rng);
    p[FitParam::kV2] = oscillates(kind) && kind == FitKind::kTpi ? 0.3 + 0.65 * unit(rng) : 0.0;
    p[FitParam::kSigma] = 0.2 + 0.3 * unit(rng);
    p[FitParam::kX0] = -0.1 + 0.2 * unit(rng);
    // Long synthetic wavelengths keep the fringe resolvable on a modest grid.
    p[FitParam::kWavelength] = oscillates(kind) ? 20000 + 60000 * unit(rng) : 775;
    c.model.wavelength_nm = p[FitParam::kWavelength];
    double reach = (kind == FitKind::kDualMzi ? 8 : 4) * p[FitParam::kSigma];
    double step = oscillates(kind) ? p[FitParam::kWavelength] * 1e-6 / 16 : p[FitParam::kSigma] / 20;
    for (double x = -reach; x <= reach; x += step) {
        c.data.x.push_back(x);
        c.data.y.push_back(oracle(kind, static_cast<int>(c.model.port), p, x));
    }
    return c;
}

}  // namespace

TEST(FitModel, names_and_usage) {
    for (auto k : kAllKinds) {
        EXPECT_EQ(parse_fit_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_fit_kind("gauss"), ConfigError);
    FitModel m;
    m.kind = FitKind::kOpi;
    EXPECT_FALSE(m.is_free(FitParam::kWavelength));
    m.fit_wavelength = true;
    EXPECT_TRUE(m.is_free(FitParam::kWavelength));
    EXPECT_FALSE(m.uses(FitParam::kV2));
    m.kind = FitKind::kTpi;
    EXPECT_TRUE(m.uses(FitParam::kV2));
    m.kind = FitKind::kHomDip;
    EXPECT_FALSE(m.uses(FitParam::kWavelength));
    m.pinned[FitParam::kSigma] = 0.3;
    EXPECT_FALSE(m.is_free(FitParam::kSigma));
    EXPECT_EQ(to_string(FitParam::kSigma), "sigma_mm");
}

TEST(FitModel, values_match_oracle) {
    std::mt19937_64 rng(1);
    for (auto kind : kAllKinds) {
        for (int trial = 0; trial < 20; ++trial) {
            auto c = random_case(kind, rng);
            for (size_t i = 0; i < c.data.x.size(); i += 7) {
                double expected = c.data.y[i];
                EXPECT_NEAR(model_value(c.model, c.truth, c.data.x[i]), expected, 1e-9 * std::abs(expected) + 1e-12);
            }
        }
    }
}

TEST(FitModel, gradient_matches_central_differences) {
    std::mt19937_64 rng(2);
    for (auto kind : kAllKinds) {
        for (int trial = 0; trial < 20; ++trial) {
            auto c = random_case(kind, rng);
            FitModel m = c.model;
            std::uniform_real_distribution<double> xs(-2.0, 2.0);
            for (int j = 0; j < 20; ++j) {
                double x = xs(rng);
                auto g = model_gradient(m, c.truth, x);
                for (size_t q = 0; q < kFitParamCount; ++q) {
                    if (!m.uses(static_cast<FitParam>(q))) {
                        continue;
                    }
                    double h = 1e-4 * std::max(std::abs(c.truth.values[q]), 0.1);
                    auto central = [&](double step) {
                        FitParams hi = c.truth;
                        FitParams lo = c.truth;
                        hi.values[q] += step;
                        lo.values[q] -= step;
                        return (model_value(m, hi, x) - model_value(m, lo, x)) / (2 * step);
                    };
                    // Richardson extrapolation cancels the h^2 error term.
                    double fd = (4 * central(h / 2) - central(h)) / 3;
                    double scale = std::max({std::abs(fd), std::abs(g[q]), 1e-3 * c.truth[FitParam::kNMax]});
                    EXPECT_LE(std::abs(g[q] - fd), 1e-6 * scale) << to_string(kind) << " " << to_string(static_cast<FitParam>(q));
                }
            }
        }
    }
}

TEST(Fit, recovers_noise_free_parameters) {
    std::mt19937_64 rng(3);
    for (auto kind : kAllKinds) {
        for (int trial = 0; trial < 15; ++trial) {
            auto c = random_case(kind, rng);
            auto r = fit(c.data, c.model);
            EXPECT_TRUE(r.converged) << to_string(kind);
            for (auto q : r.free_params) {
                double t = c.truth[q];
                EXPECT_NEAR(r.params[q], t, 1e-6 * std::max(std::abs(t), 1e-3))
                    << to_string(kind) << " " << to_string(q) << " trial " << trial;
            }
            EXPECT_NEAR(r.fwhm_mm, model_fwhm(kind, c.truth[FitParam::kSigma]), 1e-6);
            EXPECT_EQ(r.points, c.data.x.size());
        }
    }
}

TEST(Fit, free_wavelength_is_recovered) {
    std::mt19937_64 rng(4);
    for (auto kind : {FitKind::kOpi, FitKind::kTpi}) {
        auto c = random_case(kind, rng);
        c.model.fit_wavelength = true;
        c.model.wavelength_nm *= 1.002;
        auto r = fit(c.data, c.model);
        EXPECT_NEAR(r.params[FitParam::kWavelength], c.truth[FitParam::kWavelength],
                    1e-6 * c.truth[FitParam::kWavelength]);
    }
}

TEST(Fit, pinned_parameters_stay_put) {
    std::mt19937_64 rng(5);
    auto c = random_case(FitKind::kHomDip, rng);
    c.model.pinned[FitParam::kSigma] = c.truth[FitParam::kSigma];
    c.model.pinned[FitParam::kX0] = c.truth[FitParam::kX0];
    auto r = fit(c.data, c.model);
    EXPECT_EQ(r.params[FitParam::kSigma], c.truth[FitParam::kSigma]);
    EXPECT_EQ(r.params[FitParam::kX0], c.truth[FitParam::kX0]);
    EXPECT_EQ(r.std_error[FitParam::kSigma], 0.0);
    EXPECT_EQ(r.free_params.size(), 2u);
    EXPECT_NEAR(r.params[FitParam::kV1], c.truth[FitParam::kV1], 1e-9);
}

TEST(Fit, scale_equivariance) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> noise(0, 1);
    FitModel m;
    m.kind = FitKind::kHomDip;
    FitData d;
    for (int i = -200; i <= 200; ++i) {
        double x = i * 0.01;
        d.x.push_back(x);
        double y = 5000 * (1 - 0.45 * std::exp(-std::pow(x - 0.03, 2) / 0.35 / 0.35));
        d.y.push_back(y + std::sqrt(y) * noise(rng));
    }
    auto a = fit(d, m);
    FitData scaled = d;
    for (auto &y : scaled.y) {
        y *= 3;
    }
    auto b = fit(scaled, m);
    EXPECT_NEAR(b.params[FitParam::kNMax] / a.params[FitParam::kNMax], 3, 1e-6);
    for (auto q : {FitParam::kV1, FitParam::kSigma, FitParam::kX0}) {
        EXPECT_NEAR(b.params[q], a.params[q], 1e-6 * std::max(1.0, std::abs(a.params[q]))) << to_string(q);
    }
    // Recovered within a few standard errors of the generating values.
    EXPECT_LT(std::abs(a.params[FitParam::kV1] - 0.45), 5 * a.std_error[FitParam::kV1]);
    EXPECT_LT(std::abs(a.params[FitParam::kSigma] - 0.35), 5 * a.std_error[FitParam::kSigma]);
    EXPECT_GT(a.std_error[FitParam::kV1], 0);
}

TEST(Fit, fwhm_ratio) {
    for (double s : {0.1, 0.35, 1.0}) {
        EXPECT_NEAR(model_fwhm(FitKind::kTpi, s) / model_fwhm(FitKind::kOpi, s), 1 / std::sqrt(2.0), 1e-15);
        EXPECT_NEAR(model_fwhm(FitKind::kDualMzi, s) / model_fwhm(FitKind::kHomDip, s), 2.0, 1e-15);
    }
}

TEST(Fit, default_init_for_envelopes) {
    std::mt19937_64 rng(7);
    for (auto kind : {FitKind::kHomDip, FitKind::kHomPeak, FitKind::kDualMzi}) {
        auto c = random_case(kind, rng);
        auto p = default_init(c.data, c.model);
        double step = c.data.x[1] - c.data.x[0];
        EXPECT_NEAR(p[FitParam::kX0], c.truth[FitParam::kX0], step) << to_string(kind);
        EXPECT_NEAR(p[FitParam::kSigma] / c.truth[FitParam::kSigma], 1, 0.2) << to_string(kind);
        EXPECT_NEAR(p[FitParam::kV1] / c.truth[FitParam::kV1], 1, 0.2) << to_string(kind);
    }
}

TEST(Fit, flat_data_has_no_visibility) {
    FitData d;
    for (int i = -50; i <= 50; ++i) {
        d.x.push_back(i * 0.02);
        d.y.push_back(1000);
    }
    for (auto kind : {FitKind::kHomDip, FitKind::kDualMzi}) {
        FitModel m;
        m.kind = kind;
        auto r = fit(d, m);
        EXPECT_NEAR(r.params[FitParam::kV1], 0.0, 1e-6);
        EXPECT_NEAR(r.params[FitParam::kNMax], 1000.0, 1e-3);
        EXPECT_NEAR(visibility(d, kind), 0.0, 1e-12);
    }
}

TEST(Fit, input_errors) {
    FitModel m;
    m.kind = FitKind::kHomDip;
    FitData tiny{{0, 1, 2, 3, 4}, {1, 2, 3, 4, 5}, {}};
    EXPECT_THROW(fit(tiny, m), InputError);
    FitData bad{{0, 1, 2, 3, 4, 5, 6}, {1, 2, NAN, 4, 5, 6, 7}, {}};
    EXPECT_THROW(fit(bad, m), InputError);
    FitData ragged{{0, 1, 2}, {1, 2}, {}};
    EXPECT_THROW(fit(ragged, m), InputError);
    FitData exposure{{0, 1, 2, 3, 4, 5, 6}, {1, 2, 3, 4, 5, 6, 7}, {1, 1, 1, 0, 1, 1, 1}};
    EXPECT_THROW(fit(exposure, m), InputError);
    FringeScan scan;
    scan.dx_mm = {0, 1};
    EXPECT_THROW(FitData::from_scan(scan, "nope"), LookupError);
}

TEST(Visibility, from_data_and_result) {
    FitData d;
    for (int i = -300; i <= 300; ++i) {
        double x = i * 0.005;
        d.x.push_back(x);
        d.y.push_back(800 * (1 - 0.4 * std::exp(-x * x / 0.09)));
    }
    EXPECT_NEAR(visibility(d, FitKind::kHomDip), 0.4, 1e-6);
    FitModel m;
    m.kind = FitKind::kHomDip;
    auto r = fit(d, m);
    EXPECT_NEAR(visibility(r), 0.4, 1e-6);
    EXPECT_NEAR(r.visibility, 0.4, 1e-6);

    // One-photon fringe: (max - min) / (max + min) equals V at the centre.
    FitModel o;
    o.kind = FitKind::kOpi;
    o.wavelength_nm = 775;
    FitParams p;
    p[FitParam::kNMax] = 1000;
    p[FitParam::kV1] = 0.9;
    p[FitParam::kSigma] = 0.35;
    p[FitParam::kX0] = 0;
    p[FitParam::kWavelength] = 775;
    FitResult fr;
    fr.model = o;
    fr.params = p;
    EXPECT_NEAR(visibility(fr), 0.9, 1e-5);
}
