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

#include "wcpi/wcpi.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

std::string to_json(const wcpi_scenario *s) {
    size_t needed = 0;
    EXPECT_EQ(wcpi_scenario_to_json(s, nullptr, 0, &needed), WCPI_OK);
    std::string buf(needed, '\0');
    EXPECT_EQ(wcpi_scenario_to_json(s, buf.data(), buf.size(), &needed), WCPI_OK);
    buf.resize(needed - 1);
    return buf;
}

std::vector<double> column(const wcpi_scan *scan, const char *name) {
    std::vector<double> v(wcpi_scan_rows(scan));
    EXPECT_EQ(wcpi_scan_values(scan, name, v.data(), v.size()), WCPI_OK);
    return v;
}

}  // namespace

TEST(CApi, statistics) {
    double p = 0;
    ASSERT_EQ(wcpi_poisson_pmf(2, 0.01, &p), WCPI_OK);
    EXPECT_NEAR(p, 0.01 * 0.01 / 2 * std::exp(-0.01), 1e-18);
    EXPECT_EQ(wcpi_poisson_pmf(2, -1, &p), WCPI_ERR_DOMAIN);
    EXPECT_NE(std::string(wcpi_last_error()), "");
    EXPECT_EQ(wcpi_poisson_pmf(2, 0.1, nullptr), WCPI_ERR_ARGUMENT);
    double r = 0;
    ASSERT_EQ(wcpi_pmf_ratio(1, 0.01, &r), WCPI_OK);
    EXPECT_NEAR(r, 200, 1e-9);
    EXPECT_EQ(wcpi_pmf_ratio(1, 0.0, &r), WCPI_ERR_DOMAIN);
    int n = 0;
    ASSERT_EQ(wcpi_default_truncation(0.01, &n), WCPI_OK);
    EXPECT_GE(n, 2);
    wcpi_far_rates rates{};
    ASSERT_EQ(wcpi_far_rates_compute(0.01, 20e6, &rates), WCPI_OK);
    EXPECT_NEAR(rates.coincidence_avg_hz, 495.02, 0.01);
    EXPECT_EQ(wcpi_far_rates_compute(0.01, 0, &rates), WCPI_ERR_CONFIG);
    EXPECT_STREQ(wcpi_version(), "0.1.0");
}

TEST(CApi, scenarios) {
    ASSERT_EQ(wcpi_builtin_count(), 7u);
    EXPECT_STREQ(wcpi_builtin_name(0), "fig3");
    EXPECT_EQ(wcpi_builtin_name(7), nullptr);
    wcpi_scenario *s = nullptr;
    EXPECT_EQ(wcpi_scenario_builtin("nope", &s), WCPI_ERR_LOOKUP);
    EXPECT_EQ(s, nullptr);
    ASSERT_EQ(wcpi_scenario_builtin("fig5", &s), WCPI_OK);
    EXPECT_STREQ(wcpi_scenario_name(s), "fig5");
    std::string text = to_json(s);
    wcpi_scenario *copy = nullptr;
    ASSERT_EQ(wcpi_scenario_from_json(text.c_str(), &copy), WCPI_OK);
    EXPECT_EQ(to_json(copy), text);
    EXPECT_EQ(wcpi_scenario_apply_json(copy, R"({"bogus": 1})"), WCPI_ERR_CONFIG);
    ASSERT_EQ(wcpi_scenario_apply_json(copy, R"({"grid": {"start_mm": -0.1, "stop_mm": 0.1, "step_mm": 0.05}})"),
              WCPI_OK);
    size_t count = 0;
    ASSERT_EQ(wcpi_scenario_grid(copy, nullptr, 0, &count), WCPI_OK);
    EXPECT_EQ(count, 5u);
    std::vector<double> g(count);
    ASSERT_EQ(wcpi_scenario_grid(copy, g.data(), g.size(), &count), WCPI_OK);
    EXPECT_DOUBLE_EQ(g[0], -0.1);
    size_t small = 0;
    EXPECT_EQ(wcpi_scenario_grid(copy, g.data(), 2, &small), WCPI_ERR_ARGUMENT);

    size_t errors = 9;
    size_t warnings = 9;
    size_t needed = 0;
    ASSERT_EQ(wcpi_scenario_validate(s, &errors, &warnings, nullptr, 0, &needed), WCPI_OK);
    EXPECT_EQ(errors, 0u);
    EXPECT_EQ(warnings, 0u);
    ASSERT_EQ(wcpi_scenario_apply_json(s, R"({"coincidence": [{"a": 1, "b": 2, "window_ns": 100}]})"), WCPI_OK);
    ASSERT_EQ(wcpi_scenario_validate(s, &errors, &warnings, nullptr, 0, &needed), WCPI_OK);
    EXPECT_EQ(errors, 1u);
    std::string report(needed, '\0');
    ASSERT_EQ(wcpi_scenario_validate(s, &errors, &warnings, report.data(), report.size(), &needed), WCPI_OK);
    EXPECT_NE(report.find("window_ns"), std::string::npos);
    EXPECT_EQ(wcpi_scenario_load("/nonexistent.json", &s), WCPI_ERR_IO);
    wcpi_scenario_free(s);
    wcpi_scenario_free(copy);
    wcpi_scenario_free(nullptr);
}

TEST(CApi, scans_and_fits) {
    wcpi_scenario *s = nullptr;
    ASSERT_EQ(wcpi_scenario_builtin("fig6", &s), WCPI_OK);
    size_t count = 0;
    ASSERT_EQ(wcpi_make_grid(-1.05, 1.05, 0.0525, nullptr, 0, &count), WCPI_OK);
    std::vector<double> grid(count);
    ASSERT_EQ(wcpi_make_grid(-1.05, 1.05, 0.0525, grid.data(), grid.size(), &count), WCPI_OK);
    EXPECT_EQ(count, 41u);
    EXPECT_EQ(wcpi_make_grid(0, 1, 0, nullptr, 0, &count), WCPI_ERR_DOMAIN);

    wcpi_mc_options opt{200000, 11, 2, 0};
    wcpi_scan *scan = nullptr;
    ASSERT_EQ(wcpi_sweep(s, grid.data(), grid.size(), &opt, &scan), WCPI_OK);
    ASSERT_EQ(wcpi_scan_attach_analytic(scan, s), WCPI_OK);
    EXPECT_EQ(wcpi_scan_rows(scan), 41u);
    size_t ncol = wcpi_scan_column_count(scan);
    EXPECT_STREQ(wcpi_scan_column_name(scan, 0), "dx_mm");
    EXPECT_STREQ(wcpi_scan_column_name(scan, ncol - 1), "exposure_s");
    EXPECT_EQ(wcpi_scan_column_name(scan, ncol), nullptr);
    auto analytic = column(scan, "analytic_nd1d2_hz");
    auto mc = column(scan, "nd1d2_hz");
    EXPECT_NEAR(analytic[0], 4510, 50);
    double v = 0;
    EXPECT_EQ(wcpi_scan_values(scan, "missing", &v, 1), WCPI_ERR_LOOKUP);

    std::string path = testing::TempDir() + "wcpi_capi_scan.csv";
    ASSERT_EQ(wcpi_scan_write_csv(scan, path.c_str()), WCPI_OK);
    wcpi_scan *back = nullptr;
    ASSERT_EQ(wcpi_scan_read_csv(path.c_str(), &back), WCPI_OK);
    EXPECT_EQ(column(back, "nd1d2_hz"), mc);
    EXPECT_EQ(column(back, "exposure_s"), column(scan, "exposure_s"));
    std::remove(path.c_str());

    wcpi_fit *fit = nullptr;
    ASSERT_EQ(wcpi_fit_scan(scan, "nd1d2_hz", "hom_dip", nullptr, &fit), WCPI_OK);
    EXPECT_TRUE(wcpi_fit_converged(fit));
    double vis = 0;
    double err = 0;
    ASSERT_EQ(wcpi_fit_param(fit, "visibility", &vis), WCPI_OK);
    ASSERT_EQ(wcpi_fit_param(fit, "v1_err", &err), WCPI_OK);
    EXPECT_LT(std::abs(vis - 0.5 * 0.95 * 0.99), 5 * err + 0.01);
    EXPECT_EQ(wcpi_fit_param(fit, "bogus", &v), WCPI_ERR_LOOKUP);
    size_t needed = 0;
    ASSERT_EQ(wcpi_fit_to_json(fit, nullptr, 0, &needed), WCPI_OK);
    EXPECT_GT(needed, 10u);
    wcpi_fit_free(fit);
    EXPECT_EQ(wcpi_fit_scan(scan, "nd1d2_hz", "spline", nullptr, &fit), WCPI_ERR_CONFIG);

    wcpi_fit_options fo{};
    fo.pin_sigma = 1;
    fo.sigma_mm = 0.35;
    ASSERT_EQ(wcpi_fit_scan(scan, "analytic_nd1d2_hz", "hom_dip", &fo, &fit), WCPI_OK);
    double sigma = 0;
    ASSERT_EQ(wcpi_fit_param(fit, "sigma_mm", &sigma), WCPI_OK);
    EXPECT_EQ(sigma, 0.35);
    wcpi_fit_free(fit);
    wcpi_scan_free(back);
    wcpi_scan_free(scan);
    wcpi_scenario_free(s);
}

TEST(CApi, tags_and_coincidences) {
    wcpi_scenario *s = nullptr;
    ASSERT_EQ(wcpi_scenario_builtin("fig5", &s), WCPI_OK);
    wcpi_tags *tags = nullptr;
    ASSERT_EQ(wcpi_simulate_point_tags(s, 2.1, 400000, 3, &tags), WCPI_OK);
    EXPECT_DOUBLE_EQ(wcpi_tags_duration(tags), 0.02);
    wcpi_coincidence_config cfg{1, 2, 4, 0, 0};
    wcpi_coincidence_result res{};
    ASSERT_EQ(wcpi_count_coincidences(tags, &cfg, &res), WCPI_OK);
    EXPECT_LE(res.duration_s, 0.02);
    EXPECT_GT(res.duration_s, 0.0199);
    EXPECT_NEAR(res.rate_hz, 4510, 5 * std::sqrt(4510 * 0.02) / 0.02);

    std::string path = testing::TempDir() + "wcpi_capi_tags.csv";
    ASSERT_EQ(wcpi_tags_write_csv(tags, path.c_str()), WCPI_OK);
    wcpi_tags *back = nullptr;
    ASSERT_EQ(wcpi_tags_read_csv(path.c_str(), &back), WCPI_OK);
    EXPECT_EQ(wcpi_tags_count(back), wcpi_tags_count(tags));
    EXPECT_EQ(wcpi_tags_duration(back), 0.0);
    cfg.duration_s = 0.02;
    wcpi_coincidence_result res2{};
    ASSERT_EQ(wcpi_count_coincidences(back, &cfg, &res2), WCPI_OK);
    EXPECT_EQ(res2.pair_count, res.pair_count);
    std::remove(path.c_str());
    cfg.window_ns = 0;
    EXPECT_EQ(wcpi_count_coincidences(back, &cfg, &res2), WCPI_ERR_DOMAIN);

    double acc = 0;
    ASSERT_EQ(wcpi_accidental_rate(300e3, 300e3, 20e6, &acc), WCPI_OK);
    EXPECT_NEAR(acc, 4500, 1e-9);
    EXPECT_EQ(wcpi_tags_read_csv("/nonexistent.csv", &back), WCPI_ERR_IO);
    wcpi_tags_free(back);
    wcpi_tags_free(tags);
    wcpi_scenario_free(s);
}
