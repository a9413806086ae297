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

#include "wcpi/mc_engine.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_support.h"
#include "wcpi/detector.h"
#include "wcpi/errors.h"

using namespace wcpi;
using wcpi_test::poisson_sigmas;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPhaseSteps = 4096;

double click(double mu, double eta = 1.0) {
    return 1.0 - std::exp(-eta * mu);
}

double envelope(double dx, double sigma) {
    return std::exp(-dx * dx / (2 * sigma * sigma));
}

double k_dx(const ScenarioConfig &c, double dx) {
    return 2 * kPi * dx / (c.source.wavelength_nm * 1e-6);
}

/// Port intensities of the single interferometer at a given phase.
std::pair<double, double> single_mzi_mu(const ScenarioConfig &c, double dx, double phi) {
    double n = c.source.mean();
    double x = envelope(dx, c.source.envelope_sigma_mm) * std::cos(k_dx(c, dx) + phi);
    return {n / 2 * (1 + c.vis.v1 * x), n / 2 * (1 - c.vis.v2 * x)};
}

/// Averages f(phi) over a uniform phase, or evaluates it at zero.
template <typename F>
double phase_average(bool randomized, F f) {
    if (!randomized) {
        return f(0.0);
    }
    double sum = 0;
    for (int k = 0; k < kPhaseSteps; ++k) {
        sum += f(2 * kPi * (k + 0.5) / kPhaseSteps);
    }
    return sum / kPhaseSteps;
}

ScenarioConfig with_mean(ScenarioConfig c, double mean) {
    c.source.mean_photon_number = MeanPhotonNumber(mean);
    return c;
}

uint64_t both(const PointResult &r) {
    return r.click_table[3];
}

}  // namespace

TEST(Detector, click_probability) {
    DetectorSpec d;
    d.efficiency = 0.2;
    EXPECT_DOUBLE_EQ(click_probability(0.5, d), -std::expm1(-0.1));
    EXPECT_EQ(click_probability(0.0, d), 0.0);
    EXPECT_THROW(click_probability(-1.0, d), std::domain_error);
    d.efficiency = 0;
    EXPECT_THROW(d.validate(), ConfigError);
    d.efficiency = 1;
    d.dark_rate_hz = -1;
    EXPECT_THROW(d.validate(), ConfigError);
}

TEST(SimulatePoint, zero_mean_gives_no_clicks) {
    for (const auto &name : builtin_names()) {
        auto c = with_mean(builtin(name), 0.0);
        auto r = simulate_point(c, 0.1, 20000, RngSeed{3});
        for (auto s : r.singles) {
            EXPECT_EQ(s, 0u) << name;
        }
        uint64_t events = r.pulses * (c.kind == ScenarioKind::kTemporalSeparated ? 2 : 1);
        EXPECT_EQ(r.click_table[0], events) << name;
    }
}

TEST(SimulatePoint, rejects_bad_arguments) {
    auto c = builtin("fig5");
    EXPECT_THROW(simulate_point(c, 0, 0, RngSeed{1}), ConfigError);
    c.vis.v1 = 2;
    EXPECT_THROW(simulate_point(c, 0, 10, RngSeed{1}), ConfigError);
}

TEST(PortIntensities, match_independent_formulas) {
    auto c = builtin("fig5");
    for (double dx : {0.0, 0.03, 0.4}) {
        for (double phi : {0.0, 1.0, 2.5}) {
            auto mu = port_intensities(c, dx, phi);
            auto [m1, m2] = single_mzi_mu(c, dx, phi);
            ASSERT_EQ(mu.size(), 1u);
            EXPECT_NEAR(mu[0][0], m1, 1e-15);
            EXPECT_NEAR(mu[0][1], m2, 1e-15);
        }
    }
    auto t = builtin("fig8a");
    double q = t.source.mean() / 4;
    auto mu = port_intensities(t, 0.0, 0.0);
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_NEAR(mu[0][0], 2 * q, 1e-15);
    EXPECT_NEAR(mu[0][1], 0.0, 1e-15);
    EXPECT_NEAR(mu[1][0], 0.0, 1e-15);
    EXPECT_NEAR(mu[1][1], 2 * q, 1e-15);
    auto d = builtin("fig10");
    auto dm = port_intensities(d, 0.0, 0.0);
    double qd = d.source.mean() / 4;
    EXPECT_NEAR(dm[0][0], qd * 1.98, 1e-15);
    EXPECT_NEAR(dm[0][1], qd * 0.02, 1e-15);
    EXPECT_NEAR(dm[0][2], qd * 1.98, 1e-15);
}

TEST(SimulatePoint, stable_single_mzi_matches_exact_expectation) {
    auto c = builtin("fig5");
    const uint64_t pulses = 1000000;
    for (double dx : {0.0, 0.05, 0.1937, 0.35, 2.0}) {
        auto r = simulate_point(c, dx, pulses, RngSeed{17});
        auto [m1, m2] = single_mzi_mu(c, dx, 0.0);
        EXPECT_LT(poisson_sigmas(r.singles[0], pulses * click(m1)), 5) << dx;
        EXPECT_LT(poisson_sigmas(r.singles[1], pulses * click(m2)), 5) << dx;
        EXPECT_LT(poisson_sigmas(both(r), pulses * click(m1) * click(m2)), 5) << dx;
        auto coinc = point_coincidences(c, r);
        ASSERT_EQ(coinc.size(), 1u);
        EXPECT_EQ(coinc[0].pair_count, both(r));
        EXPECT_DOUBLE_EQ(r.duration_s, pulses / 20e6);
    }
}

TEST(SimulatePoint, randomized_single_mzi_matches_exact_expectation) {
    auto c = builtin("fig6");
    const uint64_t pulses = 1000000;
    for (double dx : {0.0, 0.1, 0.35, 2.0}) {
        auto r = simulate_point(c, dx, pulses, RngSeed{5});
        double p1 = phase_average(true, [&](double phi) { return click(single_mzi_mu(c, dx, phi).first); });
        double p12 = phase_average(true, [&](double phi) {
            auto [m1, m2] = single_mzi_mu(c, dx, phi);
            return click(m1) * click(m2);
        });
        EXPECT_LT(poisson_sigmas(r.singles[0], pulses * p1), 5) << dx;
        EXPECT_LT(poisson_sigmas(both(r), pulses * p12), 5) << dx;
    }
}

TEST(SimulatePoint, efficiency_thins_clicks) {
    auto c = builtin("fig5");
    c.detectors[0].efficiency = 0.3;
    const uint64_t pulses = 1000000;
    auto r = simulate_point(c, 2.0, pulses, RngSeed{8});
    auto [m1, m2] = single_mzi_mu(c, 2.0, 0.0);
    EXPECT_LT(poisson_sigmas(r.singles[0], pulses * click(m1, 0.3)), 5);
    EXPECT_LT(poisson_sigmas(r.singles[1], pulses * click(m2)), 5);
    EXPECT_LT(poisson_sigmas(both(r), pulses * click(m1, 0.3) * click(m2)), 5);
}

TEST(SimulatePoint, temporal_pairings_match_exact_expectation) {
    const uint64_t pulses = 1000000;
    for (const char *name : {"fig8a", "fig8b"}) {
        auto c = builtin(name);
        double q = c.source.mean() / 4;
        for (double dx : {0.0, 0.2, 2.0}) {
            double g = envelope(dx, c.source.envelope_sigma_mm);
            auto mu = [&](int slot, int port, double phi) {
                double x = g * std::cos(k_dx(c, dx) + phi);
                double sign = (slot == 0) == (port == 1) ? 1.0 : -1.0;
                return q * (1 + sign * x);
            };
            bool cross = c.coincidence[0].electrical_delay_ns > 0;
            double expected = phase_average(true, [&](double phi) {
                if (cross) {
                    return click(mu(0, 1, phi)) * click(mu(1, 2, phi));
                }
                return click(mu(0, 1, phi)) * click(mu(0, 2, phi)) + click(mu(1, 1, phi)) * click(mu(1, 2, phi));
            });
            auto r = simulate_point(c, dx, pulses, RngSeed{21});
            auto coinc = point_coincidences(c, r);
            EXPECT_LT(poisson_sigmas(coinc[0].pair_count, pulses * expected), 5) << name << " " << dx;
        }
    }
}

TEST(SimulatePoint, temporal_tags_sit_on_slot_times) {
    auto c = builtin("fig8a");
    auto r = simulate_point(c, 0.0, 200000, RngSeed{2});
    size_t late = 0;
    for (const auto &[ch, stream] : r.tags) {
        for (auto t : stream) {
            int64_t phase = t % 50000;
            EXPECT_TRUE(phase == 0 || phase == 8000) << t;
            late += phase == 8000;
        }
    }
    EXPECT_GT(late, 0u);
}

TEST(SimulatePoint, dual_pairs_match_exact_expectation) {
    auto c = builtin("fig10");
    const uint64_t pulses = 1000000;
    double q = c.source.mean() / 4;
    double v = c.vis.v1;
    for (double dphi : {0.0, kPi / 2, kPi}) {
        c.extra_phase_rad = dphi;
        for (double dx : {0.0, 0.3, 2.0}) {
            double gh = envelope(dx / 2, c.source.envelope_sigma_mm);
            double theta = k_dx(c, dx) / 2;
            auto p13 = phase_average(true, [&](double phi) {
                return click(q * (1 + v * gh * std::cos(theta + phi))) *
                       click(q * (1 + v * gh * std::cos(theta - dphi + phi)));
            });
            auto p23 = phase_average(true, [&](double phi) {
                return click(q * (1 - v * gh * std::cos(theta + phi))) *
                       click(q * (1 + v * gh * std::cos(theta - dphi + phi)));
            });
            auto r = simulate_point(c, dx, pulses, RngSeed{4});
            auto coinc = point_coincidences(c, r);
            EXPECT_LT(poisson_sigmas(coinc[0].pair_count, pulses * p13), 5) << dphi << " " << dx;
            EXPECT_LT(poisson_sigmas(coinc[1].pair_count, pulses * p23), 5) << dphi << " " << dx;
        }
    }
}

TEST(SimulatePoint, far_coincidence_rate_near_495_hz) {
    auto c = builtin("fig3");
    auto r = simulate_point(c, 2.1, 20000000, RngSeed{1});
    auto coinc = point_coincidences(c, r);
    double expected_count = 495.0 * r.duration_s;
    EXPECT_LT(poisson_sigmas(coinc[0].pair_count, expected_count), 5);
}

TEST(SimulatePoint, randomized_dip_is_half_of_baseline_at_zero_delay) {
    auto c = builtin("fig6");
    c.vis = {1.0, 1.0};
    const uint64_t pulses = 4000000;
    auto zero = simulate_point(c, 0.0, pulses, RngSeed{9});
    auto far = simulate_point(c, 2.1, pulses, RngSeed{9});
    double a = static_cast<double>(both(zero));
    double b = static_cast<double>(both(far));
    double ratio = a / b;
    double sigma = ratio * std::sqrt(1 / a + 1 / b);
    EXPECT_LT(std::abs(ratio - 0.5), 5 * sigma + 0.01);
}

TEST(SimulatePoint, rates_grow_with_mean_and_efficiency) {
    const uint64_t pulses = 400000;
    double last = -1;
    for (double mean : {0.01, 0.03, 0.1, 0.3}) {
        auto c = with_mean(builtin("fig6"), mean);
        auto r = simulate_point(c, 2.0, pulses, RngSeed{6});
        EXPECT_GT(static_cast<double>(r.singles[0]), last);
        last = static_cast<double>(r.singles[0]);
    }
    last = -1;
    for (double eta : {0.1, 0.3, 0.6, 1.0}) {
        auto c = with_mean(builtin("fig6"), 0.1);
        c.detectors[0].efficiency = eta;
        auto r = simulate_point(c, 2.0, pulses, RngSeed{6});
        EXPECT_GT(static_cast<double>(r.singles[0]), last);
        last = static_cast<double>(r.singles[0]);
    }
}

TEST(SimulatePoint, dark_counts) {
    auto c = with_mean(builtin("fig5"), 0.0);
    c.detectors[0].dark_rate_hz = 1e4;
    const uint64_t pulses = 1000000;
    auto r = simulate_point(c, 0.0, pulses, RngSeed{12});
    double expected = 1e4 * r.duration_s;
    EXPECT_LT(poisson_sigmas(r.singles[0], expected), 5);
    EXPECT_EQ(r.singles[1], 0u);
    const auto &stream = r.tags.at(1);
    EXPECT_EQ(stream.size(), r.singles[0]);
    EXPECT_TRUE(std::is_sorted(stream.begin(), stream.end()));
    EXPECT_GE(stream.front(), 0);
    EXPECT_LT(stream.back(), static_cast<int64_t>(pulses) * 50000);
    EXPECT_EQ(r.click_table[0], pulses);

    // Dark counts do not disturb the signal clicks.
    auto base = builtin("fig5");
    auto dark = base;
    dark.detectors[1].dark_rate_hz = 5e3;
    auto r0 = simulate_point(base, 0.2, 100000, RngSeed{3});
    auto r1 = simulate_point(dark, 0.2, 100000, RngSeed{3});
    EXPECT_EQ(r0.click_table, r1.click_table);
    EXPECT_EQ(r0.singles[0], r1.singles[0]);
    EXPECT_GT(r1.singles[1], r0.singles[1]);
}

TEST(SimulatePoint, merged_tags_are_ordered_and_complete) {
    auto c = builtin("fig10");
    auto r = simulate_point(c, 0.0, 100000, RngSeed{2});
    auto tags = merged_tags(r);
    uint64_t total = 0;
    for (auto s : r.singles) {
        total += s;
    }
    EXPECT_EQ(tags.size(), total);
    for (size_t i = 1; i < tags.size(); ++i) {
        EXPECT_LE(tags[i - 1].time_ps, tags[i].time_ps);
    }
}

TEST(SimulatePoint, deterministic_per_seed_and_dx) {
    auto c = builtin("fig6");
    auto a = simulate_point(c, 0.123, 100000, RngSeed{7});
    auto b = simulate_point(c, 0.123, 100000, RngSeed{7});
    auto other = simulate_point(c, 0.123, 100000, RngSeed{8});
    EXPECT_EQ(a.tags, b.tags);
    EXPECT_NE(a.tags, other.tags);
    auto neg_zero = simulate_point(c, -0.0, 1000, RngSeed{7});
    auto pos_zero = simulate_point(c, 0.0, 1000, RngSeed{7});
    EXPECT_EQ(neg_zero.tags, pos_zero.tags);
}

TEST(PhotonLevel, same_distribution_as_intensity_engine) {
    const uint64_t pulses = 1000000;
    for (const char *name : {"fig5", "fig6", "fig8a", "fig10"}) {
        auto c = with_mean(builtin(name), 0.1);
        for (double dx : {0.0, 0.15}) {
            auto a = simulate_point(c, dx, pulses, RngSeed{31});
            auto b = photon_level_point(c, dx, pulses, RngSeed{32});
            EXPECT_GT(wcpi_test::two_sample_chi_square_p(a.click_table, b.click_table), 1e-4) << name << " " << dx;
        }
    }
}

TEST(PhotonLevel, two_photon_arm_statistics) {
    auto c = with_mean(builtin("fig6"), 0.1);
    auto r = photon_level_point(c, 0.5, 2000000, RngSeed{13});
    double n = static_cast<double>(r.two_photon_events);
    EXPECT_GT(n, 1000);
    double frac = static_cast<double>(r.same_arm_events) / n;
    EXPECT_LT(std::abs(frac - 0.5), 5 * std::sqrt(0.25 / n));
    // Two-photon slot probability P(2) of a Poisson source.
    double p2 = 0.1 * 0.1 / 2 * std::exp(-0.1);
    EXPECT_LT(poisson_sigmas(n, p2 * 2000000), 5);

    auto d = with_mean(builtin("fig10"), 0.1);
    auto rd = photon_level_point(d, 0.5, 2000000, RngSeed{13});
    double nd = static_cast<double>(rd.two_photon_events);
    double fd = static_cast<double>(rd.same_arm_events) / nd;
    EXPECT_LT(std::abs(fd - 0.25), 5 * std::sqrt(0.25 * 0.75 / nd));
}

TEST(PhotonLevel, rejects_bright_source) {
    auto c = with_mean(builtin("fig5"), 0.2);
    EXPECT_THROW(photon_level_point(c, 0.0, 10, RngSeed{1}), ConfigError);
}

TEST(TracePulses, per_pulse_reference_agrees_with_thinned_sampler) {
    const uint64_t pulses = 300000;
    for (const char *name : {"fig5", "fig6", "fig8b", "fig10"}) {
        auto c = with_mean(builtin(name), 0.5);
        auto events = trace_pulses(c, 0.1, pulses, RngSeed{41});
        std::vector<uint64_t> table(size_t{1} << c.detectors.size(), 0);
        for (const auto &e : events) {
            uint32_t mask = 0;
            for (size_t d = 0; d < e.clicks.size(); ++d) {
                mask |= e.clicks[d] ? 1u << d : 0u;
            }
            table[mask]++;
        }
        auto r = simulate_point(c, 0.1, pulses, RngSeed{42});
        EXPECT_GT(wcpi_test::two_sample_chi_square_p(table, r.click_table), 1e-4) << name;
    }
}

TEST(TracePulses, intensities_follow_model) {
    auto c = builtin("fig5");
    auto events = trace_pulses(c, 0.07, 10, RngSeed{1});
    auto mu = port_intensities(c, 0.07, 0.0);
    ASSERT_EQ(events.size(), 10u);
    for (size_t i = 0; i < events.size(); ++i) {
        EXPECT_EQ(events[i].period_index, static_cast<int64_t>(i));
        EXPECT_EQ(events[i].mu, mu[0]);
    }
    auto t = trace_pulses(builtin("fig8a"), 0.0, 5, RngSeed{1});
    ASSERT_EQ(t.size(), 10u);
    EXPECT_EQ(t[1].slot, Slot::kLate);
}

TEST(Sweep, worker_count_and_grid_order_do_not_change_results) {
    auto c = builtin("fig6");
    auto grid = make_grid(-0.4, 0.4, 0.1);
    SweepOptions opt;
    opt.pulses_per_point = 20000;
    opt.seed = RngSeed{77};
    opt.workers = 1;
    auto one = sweep(c, grid, opt);
    opt.workers = 3;
    auto three = sweep(c, grid, opt);
    ASSERT_EQ(one.columns.size(), three.columns.size());
    for (size_t k = 0; k < one.columns.size(); ++k) {
        EXPECT_EQ(one.columns[k].values, three.columns[k].values);
    }
    std::vector<double> reversed(grid.rbegin(), grid.rend());
    auto rev = sweep(c, reversed, opt);
    for (size_t k = 0; k < one.columns.size(); ++k) {
        for (size_t i = 0; i < grid.size(); ++i) {
            EXPECT_EQ(rev.columns[k].values[grid.size() - 1 - i], one.columns[k].values[i]);
        }
    }
}

TEST(Sweep, single_point_equals_simulate_point) {
    auto c = builtin("fig10");
    SweepOptions opt;
    opt.pulses_per_point = 50000;
    opt.seed = RngSeed{5};
    auto scan = sweep(c, {0.25}, opt);
    auto r = simulate_point(c, 0.25, 50000, RngSeed{5});
    auto coinc = point_coincidences(c, r);
    EXPECT_EQ(scan.column("nd1_hz")[0], r.singles[0] / r.duration_s);
    EXPECT_EQ(scan.column("nd3_hz")[0], r.singles[2] / r.duration_s);
    EXPECT_EQ(scan.column("nd1d3_hz")[0], coinc[0].rate_hz);
    EXPECT_EQ(scan.column("nd2d3_hz")[0], coinc[1].rate_hz);
    EXPECT_EQ(scan.exposure_s[0], r.duration_s);
    EXPECT_EQ(scan.scenario, "fig10");
}

TEST(Sweep, photon_level_engine_and_errors) {
    auto c = builtin("fig3");
    SweepOptions opt;
    opt.pulses_per_point = 1000;
    opt.engine = McEngine::kPhotonLevel;
    auto scan = sweep(c, {0.0, 0.1}, opt);
    EXPECT_EQ(scan.rows(), 2u);
    EXPECT_THROW(sweep(with_mean(c, 0.5), {0.0, 0.1}, opt), ConfigError);
    opt.pulses_per_point = 0;
    EXPECT_THROW(sweep(c, {0.0}, opt), ConfigError);
    opt.pulses_per_point = 10;
    EXPECT_ANY_THROW(sweep(c, {}, opt));
    EXPECT_ANY_THROW(sweep(c, {0.0, 0.1, 0.05}, opt));
}
