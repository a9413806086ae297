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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "wcpi/errors.h"

namespace wcpi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// mu = a + b cos(phi_slot + theta) at one output port.
struct PortLine {
    int slot = 0;
    int port = 0;
    double a = 0.0;
    double b = 0.0;
    double theta = 0.0;

    double mu(double phi) const {
        return std::max(0.0, a + b * std::cos(phi + theta));
    }
};

/// A port line watched by a declared detector.
struct DetectorLine {
    PortLine line;
    size_t detector = 0;
    int channel = 0;
    double eta = 1.0;
};

struct PointModel {
    int slots = 1;
    std::vector<PortLine> ports;  // every output port, observed or not
    std::vector<DetectorLine> lines;  // ordered by slot, then declaration
    bool randomized = false;
    bool per_slot_phase = false;
    int arms = 2;
    int64_t period_ps = 0;
    int64_t slot_offset_ps = 0;
};

PointModel build_model(const ScenarioConfig &config, double dx_mm) {
    PointModel m;
    const SourceSpec &s = config.source;
    double n = s.mean();
    double k_dx = arm_phase(dx_mm, s.wavelength_nm);
    double g = fringe_envelope(dx_mm, s.envelope_sigma_mm);
    double v1 = config.vis.v1;
    double v2 = config.vis.v2;
    switch (config.kind) {
        case ScenarioKind::kSingleMziStable:
        case ScenarioKind::kSingleMziRandomized:
            m.ports = {{0, 1, n / 2, n / 2 * v1 * g, k_dx}, {0, 2, n / 2, -n / 2 * v2 * g, k_dx}};
            break;
        case ScenarioKind::kTemporalSeparated: {
            // Early slot: port 1 bright on constructive phase, port 2 dark.
            // Late slot: the orthogonal polarization enters the other way
            // round, so the signs swap.
            m.slots = 2;
            double q = n / 4;
            m.ports = {{0, 1, q, q * v1 * g, k_dx},
                       {0, 2, q, -q * v2 * g, k_dx},
                       {1, 1, q, -q * v1 * g, k_dx},
                       {1, 2, q, q * v2 * g, k_dx}};
            break;
        }
        case ScenarioKind::kDualMzi: {
            double q = n / 4;
            double gh = fringe_envelope(0.5 * dx_mm, s.envelope_sigma_mm);
            double theta = 0.5 * k_dx;
            double dphi = config.dual_phase();
            m.arms = 4;
            m.ports = {{0, 1, q, q * v1 * gh, theta},
                       {0, 2, q, -q * v1 * gh, theta},
                       {0, 3, q, q * v2 * gh, theta - dphi},
                       {0, 4, q, -q * v2 * gh, theta - dphi}};
            break;
        }
    }
    for (int slot = 0; slot < m.slots; ++slot) {
        for (size_t d = 0; d < config.detectors.size(); ++d) {
            const DetectorSpec &det = config.detectors[d];
            for (const auto &p : m.ports) {
                if (p.slot == slot && p.port == det.channel) {
                    m.lines.push_back({p, d, det.channel, det.efficiency});
                }
            }
        }
    }
    m.randomized = config.randomized();
    m.per_slot_phase = config.phase_randomization == PhaseRandomization::kPerSlot;
    m.period_ps = std::llround(1e12 / s.rep_rate_hz);
    m.slot_offset_ps = config.kind == ScenarioKind::kTemporalSeparated ? ns_to_ps(config.optical_delay_ns) : 0;
    return m;
}

void check_point_args(const ScenarioConfig &config, uint64_t pulses) {
    require_valid(config);
    if (pulses < 1) {
        throw ConfigError("pulses per point must be >= 1");
    }
}

void draw_phases(const PointModel &m, Rng &rng, double *phi) {
    if (!m.randomized) {
        phi[0] = phi[1] = 0.0;
        return;
    }
    phi[0] = kTwoPi * rng.uniform();
    phi[1] = m.per_slot_phase ? kTwoPi * rng.uniform() : phi[0];
}

PointResult empty_result(const ScenarioConfig &config, const PointModel &m, double dx_mm, uint64_t pulses) {
    PointResult r;
    r.dx_mm = dx_mm;
    r.pulses = pulses;
    r.duration_s = static_cast<double>(pulses) / config.source.rep_rate_hz;
    for (const auto &d : config.detectors) {
        r.channels.push_back(d.channel);
        r.tags[d.channel];
    }
    r.singles.assign(config.detectors.size(), 0);
    r.click_table.assign(size_t{1} << config.detectors.size(), 0);
    (void)m;
    return r;
}

/// Records one slot outcome and emits its tags.
void record_slot(PointResult &r, const PointModel &m, int64_t period, int slot, uint32_t mask) {
    if (mask == 0) {
        return;
    }
    r.click_table[mask]++;
    int64_t t = period * m.period_ps + slot * m.slot_offset_ps;
    for (size_t d = 0; d < r.channels.size(); ++d) {
        if (mask & (1u << d)) {
            r.singles[d]++;
            r.tags[r.channels[d]].push_back(t);
        }
    }
}

void finish_table(PointResult &r, const PointModel &m) {
    uint64_t events = r.pulses * static_cast<uint64_t>(m.slots);
    uint64_t seen = 0;
    for (size_t i = 1; i < r.click_table.size(); ++i) {
        seen += r.click_table[i];
    }
    r.click_table[0] = events - seen;
}

/// Dark counts: an independent Poisson process per channel over the run,
/// drawn from its own stream so the signal clicks do not depend on it.
void add_dark_counts(PointResult &r, const ScenarioConfig &config, const PointModel &m, uint64_t stream_seed) {
    int64_t span_ps = static_cast<int64_t>(r.pulses) * m.period_ps;
    for (size_t d = 0; d < config.detectors.size(); ++d) {
        const DetectorSpec &det = config.detectors[d];
        if (det.dark_rate_hz <= 0.0) {
            continue;
        }
        Rng rng(mix64(stream_seed ^ mix64(0xDA4C000000000000ULL + static_cast<uint64_t>(det.channel))));
        double mean = det.dark_rate_hz * r.duration_s;
        uint64_t count = std::poisson_distribution<uint64_t>(mean)(rng.engine());
        TagStream &stream = r.tags[det.channel];
        for (uint64_t i = 0; i < count; ++i) {
            auto t = static_cast<int64_t>(rng.uniform() * static_cast<double>(span_ps));
            stream.push_back(t);
        }
        std::sort(stream.begin(), stream.end());
        r.singles[d] += count;
    }
}

}  // namespace

std::vector<std::vector<double>> port_intensities(const ScenarioConfig &config, double dx_mm, double phi) {
    PointModel m = build_model(config, dx_mm);
    std::vector<std::vector<double>> out(m.slots, std::vector<double>(config.detectors.size(), 0.0));
    for (const auto &l : m.lines) {
        out[l.line.slot][l.detector] = l.line.mu(phi);
    }
    return out;
}

PointResult simulate_point(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed) {
    check_point_args(config, pulses);
    PointModel m = build_model(config, dx_mm);
    PointResult r = empty_result(config, m, dx_mm, pulses);
    uint64_t stream_seed = point_stream_seed(seed, dx_mm);
    Rng rng(stream_seed);

    // Thinned sampling. Each line gets a phase-independent bound q >= p(phi);
    // periods without any bounding candidate are skipped geometrically, and
    // candidates are accepted with probability p(phi) / q.
    size_t n_lines = m.lines.size();
    std::vector<double> q(n_lines);
    std::vector<double> first_cum(n_lines);
    double none = 1.0;
    for (size_t i = 0; i < n_lines; ++i) {
        const auto &l = m.lines[i];
        double bound = m.randomized ? l.line.a + std::abs(l.line.b) : l.line.mu(0.0);
        q[i] = -std::expm1(-l.eta * bound);
        first_cum[i] = (i == 0 ? 0.0 : first_cum[i - 1]) + none * q[i];
        none *= 1.0 - q[i];
    }
    double any = n_lines == 0 ? 0.0 : first_cum.back();
    if (any > 0.0) {
        double log_none = std::log1p(-any);
        std::vector<char> candidate(n_lines);
        uint64_t period = 0;
        while (true) {
            if (any < 1.0) {
                double skip = std::floor(std::log(rng.uniform_open_zero()) / log_none);
                if (skip >= static_cast<double>(pulses - period)) {
                    break;
                }
                period += static_cast<uint64_t>(skip);
            }
            if (period >= pulses) {
                break;
            }
            double u = rng.uniform() * any;
            size_t first = static_cast<size_t>(std::upper_bound(first_cum.begin(), first_cum.end(), u) - first_cum.begin());
            first = std::min(first, n_lines - 1);
            while (q[first] == 0.0 && first > 0) {
                --first;
            }
            std::fill(candidate.begin(), candidate.end(), 0);
            candidate[first] = 1;
            for (size_t j = first + 1; j < n_lines; ++j) {
                candidate[j] = rng.uniform() < q[j];
            }
            double phi[2];
            draw_phases(m, rng, phi);
            uint32_t masks[2] = {0, 0};
            for (size_t i = first; i < n_lines; ++i) {
                if (!candidate[i]) {
                    continue;
                }
                const auto &l = m.lines[i];
                bool click = true;
                if (m.randomized) {
                    double p = -std::expm1(-l.eta * l.line.mu(phi[l.line.slot]));
                    click = rng.uniform() * q[i] < p;
                }
                if (click) {
                    masks[l.line.slot] |= 1u << l.detector;
                }
            }
            for (int slot = 0; slot < m.slots; ++slot) {
                record_slot(r, m, static_cast<int64_t>(period), slot, masks[slot]);
            }
            ++period;
        }
    }
    finish_table(r, m);
    add_dark_counts(r, config, m, stream_seed);
    return r;
}

PointResult photon_level_point(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed) {
    check_point_args(config, pulses);
    if (config.source.mean() > 0.1) {
        throw ConfigError("the photon-level engine needs a mean photon number <= 0.1");
    }
    PointModel m = build_model(config, dx_mm);
    PointResult r = empty_result(config, m, dx_mm, pulses);
    uint64_t stream_seed = point_stream_seed(seed, dx_mm);
    Rng rng(stream_seed);

    // Declared detector index per port, -1 when nobody watches the port.
    std::vector<int> watcher(m.ports.size(), -1);
    std::vector<double> eta(m.ports.size(), 1.0);
    for (size_t p = 0; p < m.ports.size(); ++p) {
        for (size_t d = 0; d < config.detectors.size(); ++d) {
            if (config.detectors[d].channel == m.ports[p].port) {
                watcher[p] = static_cast<int>(d);
                eta[p] = config.detectors[d].efficiency;
            }
        }
    }
    std::vector<double> mu(m.ports.size());
    for (uint64_t period = 0; period < pulses; ++period) {
        double phi[2];
        draw_phases(m, rng, phi);
        for (int slot = 0; slot < m.slots; ++slot) {
            double total = 0.0;
            for (size_t p = 0; p < m.ports.size(); ++p) {
                mu[p] = m.ports[p].slot == slot ? m.ports[p].mu(phi[slot]) : 0.0;
                total += mu[p];
            }
            uint32_t photons = sample_photon_number(MeanPhotonNumber(total), rng);
            if (photons == 0) {
                continue;
            }
            int first_arm = -1;
            bool same_arm = true;
            uint32_t mask = 0;
            for (uint32_t k = 0; k < photons; ++k) {
                int arm = static_cast<int>(rng.uniform() * m.arms);
                if (first_arm < 0) {
                    first_arm = arm;
                } else if (arm != first_arm) {
                    same_arm = false;
                }
                double u = rng.uniform() * total;
                size_t port = 0;
                while (port + 1 < m.ports.size() && u >= mu[port]) {
                    u -= mu[port];
                    ++port;
                }
                if (watcher[port] >= 0 && rng.uniform() < eta[port]) {
                    mask |= 1u << watcher[port];
                }
            }
            if (photons == 2) {
                r.two_photon_events++;
                if (same_arm) {
                    r.same_arm_events++;
                }
            }
            record_slot(r, m, static_cast<int64_t>(period), slot, mask);
        }
    }
    finish_table(r, m);
    add_dark_counts(r, config, m, stream_seed);
    return r;
}

std::vector<PulseEvent> trace_pulses(const ScenarioConfig &config, double dx_mm, uint64_t pulses, RngSeed seed) {
    check_point_args(config, pulses);
    PointModel m = build_model(config, dx_mm);
    Rng rng(point_stream_seed(seed, dx_mm));
    std::vector<PulseEvent> events;
    events.reserve(pulses * static_cast<uint64_t>(m.slots));
    size_t n_det = config.detectors.size();
    for (uint64_t period = 0; period < pulses; ++period) {
        double phi[2];
        draw_phases(m, rng, phi);
        for (int slot = 0; slot < m.slots; ++slot) {
            PulseEvent e;
            e.period_index = static_cast<int64_t>(period);
            e.slot = static_cast<Slot>(slot);
            e.mu.assign(n_det, 0.0);
            e.clicks.assign(n_det, false);
            for (const auto &l : m.lines) {
                if (l.line.slot != slot) {
                    continue;
                }
                double mu = l.line.mu(phi[slot]);
                e.mu[l.detector] = mu;
                e.clicks[l.detector] = rng.uniform() < -std::expm1(-l.eta * mu);
            }
            events.push_back(std::move(e));
        }
    }
    return events;
}

std::vector<CoincidenceResult> point_coincidences(const ScenarioConfig &config, const PointResult &point) {
    return multi_pair_count(point.tags, config.coincidence, point.duration_s);
}

std::vector<TimeTag> merged_tags(const PointResult &point) {
    std::vector<TimeTag> out;
    for (const auto &[channel, stream] : point.tags) {
        for (int64_t t : stream) {
            out.push_back({channel, t});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const TimeTag &x, const TimeTag &y) {
        return x.time_ps != y.time_ps ? x.time_ps < y.time_ps : x.channel < y.channel;
    });
    return out;
}

FringeScan sweep(const ScenarioConfig &config, const std::vector<double> &dx_grid, const SweepOptions &options) {
    require_valid(config);
    require_valid_grid(dx_grid);
    if (options.pulses_per_point < 1) {
        throw ConfigError("pulses per point must be >= 1");
    }
    size_t n_points = dx_grid.size();
    size_t n_det = config.detectors.size();
    size_t n_pairs = config.coincidence.size();
    // Per point: singles rates, then coincidence rates, then exposure.
    std::vector<std::vector<double>> rows(n_points);

    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n_points) {
                return;
            }
            try {
                PointResult p = options.engine == McEngine::kIntensity
                                    ? simulate_point(config, dx_grid[i], options.pulses_per_point, options.seed)
                                    : photon_level_point(config, dx_grid[i], options.pulses_per_point, options.seed);
                std::vector<double> row;
                row.reserve(n_det + n_pairs + 1);
                for (size_t d = 0; d < n_det; ++d) {
                    row.push_back(static_cast<double>(p.singles[d]) / p.duration_s);
                }
                for (const auto &c : point_coincidences(config, p)) {
                    row.push_back(c.rate_hz);
                }
                row.push_back(p.duration_s);
                rows[i] = std::move(row);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_points);
                return;
            }
        }
    };
    unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<size_t>(workers, n_points));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    FringeScan scan;
    scan.scenario = config.name;
    scan.dx_mm = dx_grid;
    for (size_t d = 0; d < n_det; ++d) {
        auto &col = scan.add_column(singles_column_name(config.detectors[d].channel));
        for (size_t i = 0; i < n_points; ++i) {
            col.values[i] = rows[i][d];
        }
    }
    for (size_t k = 0; k < n_pairs; ++k) {
        auto &col = scan.add_column(coincidence_column_name(config.coincidence[k]));
        for (size_t i = 0; i < n_points; ++i) {
            col.values[i] = rows[i][n_det + k];
        }
    }
    for (size_t i = 0; i < n_points; ++i) {
        scan.exposure_s.push_back(rows[i].back());
    }
    return scan;
}

}  // namespace wcpi
