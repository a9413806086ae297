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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "wcpi/errors.h"

namespace wcpi {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kRelRssTolerance = 1e-10;
constexpr double kRelStepTolerance = 1e-12;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<FitParam, kFitParamCount> kAllParams = {
    FitParam::kNMax, FitParam::kV1, FitParam::kV2, FitParam::kSigma, FitParam::kX0, FitParam::kWavelength};

bool oscillating(FitKind kind) {
    return kind == FitKind::kOpi || kind == FitKind::kTpi;
}

/// +1 for shapes that rise above the baseline, -1 for the dip.
double hom_sign(FitKind kind) {
    return kind == FitKind::kHomDip ? -1.0 : 1.0;
}

double wave_number_per_mm(double wavelength_nm) {
    return 2.0 * std::numbers::pi / (wavelength_nm * 1e-6);
}

struct Bounds {
    std::array<double, kFitParamCount> lo;
    std::array<double, kFitParamCount> hi;
};

Bounds parameter_bounds(const FitData &data, const FitModel &model) {
    double inf = std::numeric_limits<double>::infinity();
    auto [xmin_it, xmax_it] = std::minmax_element(data.x.begin(), data.x.end());
    double min_step = inf;
    std::vector<double> sorted = data.x;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] > sorted[i - 1]) {
            min_step = std::min(min_step, sorted[i] - sorted[i - 1]);
        }
    }
    if (!std::isfinite(min_step)) {
        min_step = 0.0;
    }
    double vlo = oscillating(model.kind) ? 0.0 : -1.0;
    Bounds b;
    b.lo = {0.0, vlo, vlo, std::max(1e-6, 0.25 * min_step), *xmin_it, 1.0};
    b.hi = {inf, 1.0, 1.0, 1e3, *xmax_it, 1e6};
    return b;
}

double clamp_to(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

std::vector<double> weights(const FitData &data) {
    std::vector<double> w(data.y.size());
    for (size_t i = 0; i < w.size(); ++i) {
        if (data.exposure_s.empty()) {
            w[i] = 1.0 / std::max(data.y[i], 1.0);
        } else {
            double t = data.exposure_s[i];
            double count = data.y[i] * t;
            w[i] = t * t / std::max(count, 1.0);
        }
    }
    return w;
}

/// Mean of the outer 20% of points (by distance from the grid center).
double outer_baseline(const FitData &data) {
    size_t n = data.x.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    auto [lo, hi] = std::minmax_element(data.x.begin(), data.x.end());
    double center = 0.5 * (*lo + *hi);
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return std::abs(data.x[a] - center) > std::abs(data.x[b] - center);
    });
    size_t take = std::max<size_t>(1, n / 5);
    double sum = 0.0;
    for (size_t i = 0; i < take; ++i) {
        sum += data.y[idx[i]];
    }
    return sum / static_cast<double>(take);
}

/// Index of the largest |y - baseline|; ties resolved toward the grid center.
size_t extreme_index(const FitData &data, double baseline) {
    auto [lo, hi] = std::minmax_element(data.x.begin(), data.x.end());
    double center = 0.5 * (*lo + *hi);
    size_t best = 0;
    for (size_t i = 1; i < data.x.size(); ++i) {
        double d = std::abs(data.y[i] - baseline);
        double db = std::abs(data.y[best] - baseline);
        if (d > db || (d == db && std::abs(data.x[i] - center) < std::abs(data.x[best] - center))) {
            best = i;
        }
    }
    return best;
}

/// Full width at half deviation around index `peak` for a non-oscillating
/// profile. Returns 0 if the profile never drops to half.
double half_deviation_width(const FitData &data, double baseline, size_t peak) {
    std::vector<size_t> order(data.x.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return data.x[a] < data.x[b];
    });
    size_t pos = static_cast<size_t>(std::find(order.begin(), order.end(), peak) - order.begin());
    double half = 0.5 * std::abs(data.y[peak] - baseline);
    if (half <= 0.0) {
        return 0.0;
    }
    auto crossing = [&](int dir) -> std::optional<double> {
        size_t i = pos;
        while (true) {
            if ((dir < 0 && i == 0) || (dir > 0 && i + 1 >= order.size())) {
                return std::nullopt;
            }
            size_t j = dir < 0 ? i - 1 : i + 1;
            double di = std::abs(data.y[order[i]] - baseline);
            double dj = std::abs(data.y[order[j]] - baseline);
            if (dj < half) {
                double t = (di - half) / (di - dj);
                double xi = data.x[order[i]];
                double xj = data.x[order[j]];
                return std::abs(xi + t * (xj - xi) - data.x[peak]);
            }
            i = j;
        }
    };
    auto left = crossing(-1);
    auto right = crossing(+1);
    if (left && right) {
        return *left + *right;
    }
    if (left) {
        return 2.0 * *left;
    }
    if (right) {
        return 2.0 * *right;
    }
    return 0.0;
}

struct Evaluation {
    double rss = 0.0;
    Eigen::VectorXd residual;  // sqrt(w) (y - model)
    Eigen::MatrixXd jacobian;  // sqrt(w) d model / d p, free columns only
};

class Problem {
   public:
    Problem(const FitData &data, const FitModel &model) : data_(data), model_(model), w_(weights(data)) {
        for (FitParam p : kAllParams) {
            if (model.is_free(p)) {
                free_.push_back(p);
            }
        }
        bounds_ = parameter_bounds(data, model);
    }

    const std::vector<FitParam> &free_params() const {
        return free_;
    }

    double rss(const FitParams &p) const {
        double s = 0.0;
        for (size_t i = 0; i < data_.x.size(); ++i) {
            double r = data_.y[i] - model_value(model_, p, data_.x[i]);
            s += w_[i] * r * r;
        }
        return s;
    }

    Evaluation evaluate(const FitParams &p) const {
        size_t n = data_.x.size();
        Evaluation e;
        e.residual.resize(static_cast<Eigen::Index>(n));
        e.jacobian.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(free_.size()));
        for (size_t i = 0; i < n; ++i) {
            double sw = std::sqrt(w_[i]);
            double r = data_.y[i] - model_value(model_, p, data_.x[i]);
            e.residual(static_cast<Eigen::Index>(i)) = sw * r;
            e.rss += w_[i] * r * r;
            auto grad = model_gradient(model_, p, data_.x[i]);
            for (size_t k = 0; k < free_.size(); ++k) {
                e.jacobian(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                    sw * grad[static_cast<size_t>(free_[k])];
            }
        }
        return e;
    }

    FitParams project(FitParams p) const {
        for (FitParam q : free_) {
            size_t i = static_cast<size_t>(q);
            p.values[i] = clamp_to(p.values[i], bounds_.lo[i], bounds_.hi[i]);
        }
        return p;
    }

   private:
    const FitData &data_;
    const FitModel &model_;
    std::vector<double> w_;
    std::vector<FitParam> free_;
    Bounds bounds_;
};

FitResult run_lm(const FitData &data, const FitModel &model, FitParams start) {
    Problem problem(data, model);
    const auto &free = problem.free_params();
    auto m = static_cast<Eigen::Index>(free.size());

    FitResult result;
    result.model = model;
    result.free_params = free;
    result.points = data.x.size();

    FitParams p = problem.project(start);
    Evaluation e = problem.evaluate(p);
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < kMaxIterations && !converged; ++iter) {
        if (e.rss == 0.0) {
            converged = true;
            break;
        }
        Eigen::MatrixXd jtj = e.jacobian.transpose() * e.jacobian;
        Eigen::VectorXd jtr = e.jacobian.transpose() * e.residual;
        Eigen::VectorXd diag = jtj.diagonal();
        double floor = std::max(diag.maxCoeff(), 1e-300) * 1e-15;
        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index k = 0; k < m; ++k) {
                a(k, k) += lambda * std::max(diag(k), floor);
            }
            Eigen::VectorXd step = a.ldlt().solve(jtr);
            FitParams trial = p;
            for (Eigen::Index k = 0; k < m; ++k) {
                trial.values[static_cast<size_t>(free[static_cast<size_t>(k)])] += step(k);
            }
            trial = problem.project(trial);
            double trial_rss = problem.rss(trial);
            if (std::isfinite(trial_rss) && trial_rss <= e.rss) {
                double step_norm = 0.0;
                double p_norm = 0.0;
                for (FitParam q : free) {
                    double d = trial[q] - p[q];
                    step_norm += d * d;
                    p_norm += p[q] * p[q];
                }
                double rel_rss = (e.rss - trial_rss) / std::max(e.rss, std::numeric_limits<double>::min());
                p = trial;
                e = problem.evaluate(p);
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (rel_rss < kRelRssTolerance || std::sqrt(step_norm) < kRelStepTolerance * (std::sqrt(p_norm) + 1e-12)) {
                    converged = true;
                }
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) {
                    // No downhill step remains at any damping: a minimum up
                    // to rounding.
                    converged = std::isfinite(e.rss);
                    break;
                }
            }
        }
        if (!accepted) {
            break;
        }
    }

    result.params = p;
    result.rss = e.rss;
    result.iterations = iter;
    result.converged = converged && std::isfinite(e.rss);

    Eigen::MatrixXd jtj = e.jacobian.transpose() * e.jacobian;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jtj);
    for (auto &v : result.std_error.values) {
        v = 0.0;
    }
    result.covariance.assign(free.size(), std::vector<double>(free.size(), kNan));
    if (m > 0 && lu.isInvertible()) {
        Eigen::MatrixXd cov = lu.inverse();
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) {
                result.covariance[static_cast<size_t>(i)][static_cast<size_t>(j)] = cov(i, j);
            }
            result.std_error[free[static_cast<size_t>(i)]] = std::sqrt(std::max(cov(i, i), 0.0));
        }
    } else {
        for (FitParam q : free) {
            result.std_error[q] = kNan;
        }
    }
    result.fwhm_mm = model_fwhm(model.kind, p[FitParam::kSigma]);
    result.visibility = visibility(result);
    return result;
}

void check_data(const FitData &data, const FitModel &model) {
    if (data.x.size() != data.y.size() || (!data.exposure_s.empty() && data.exposure_s.size() != data.x.size())) {
        throw InputError("fit data columns have different lengths");
    }
    for (size_t i = 0; i < data.x.size(); ++i) {
        if (!std::isfinite(data.x[i]) || !std::isfinite(data.y[i])) {
            throw InputError("fit data contains non-finite values");
        }
        if (!data.exposure_s.empty() && !(data.exposure_s[i] > 0.0 && std::isfinite(data.exposure_s[i]))) {
            throw InputError("exposure times must be positive");
        }
    }
    size_t free = 0;
    for (FitParam p : kAllParams) {
        free += model.is_free(p) ? 1 : 0;
    }
    if (data.x.size() < free + 2) {
        throw InputError("need at least " + std::to_string(free + 2) + " points to fit " + std::to_string(free) +
                         " parameters, got " + std::to_string(data.x.size()));
    }
}

}  // namespace

std::string_view to_string(FitKind kind) {
    switch (kind) {
        case FitKind::kOpi:
            return "opi";
        case FitKind::kTpi:
            return "tpi";
        case FitKind::kHomDip:
            return "hom_dip";
        case FitKind::kHomPeak:
            return "hom_peak";
        case FitKind::kDualMzi:
            return "dual_mzi";
    }
    throw std::logic_error("unknown fit kind");
}

std::string_view to_string(FitParam p) {
    switch (p) {
        case FitParam::kNMax:
            return "n_max";
        case FitParam::kV1:
            return "v1";
        case FitParam::kV2:
            return "v2";
        case FitParam::kSigma:
            return "sigma_mm";
        case FitParam::kX0:
            return "x0_mm";
        case FitParam::kWavelength:
            return "wavelength_nm";
    }
    throw std::logic_error("unknown fit parameter");
}

FitKind parse_fit_kind(std::string_view name) {
    for (FitKind k : {FitKind::kOpi, FitKind::kTpi, FitKind::kHomDip, FitKind::kHomPeak, FitKind::kDualMzi}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown fit model '" + std::string(name) + "'");
}

bool FitModel::uses(FitParam p) const {
    switch (p) {
        case FitParam::kNMax:
        case FitParam::kV1:
        case FitParam::kSigma:
        case FitParam::kX0:
            return true;
        case FitParam::kV2:
            return kind == FitKind::kTpi;
        case FitParam::kWavelength:
            return oscillating(kind);
    }
    return false;
}

bool FitModel::is_free(FitParam p) const {
    if (!uses(p) || pinned.count(p)) {
        return false;
    }
    return p != FitParam::kWavelength || fit_wavelength;
}

FitData FitData::from_scan(const FringeScan &scan, std::string_view column) {
    FitData d;
    d.x = scan.dx_mm;
    d.y = scan.column(column);
    d.exposure_s = scan.exposure_s;
    return d;
}

double model_fwhm(FitKind kind, double sigma_mm) {
    switch (kind) {
        case FitKind::kOpi:
            return fwhm_one_photon(sigma_mm);
        case FitKind::kTpi:
        case FitKind::kHomDip:
        case FitKind::kHomPeak:
            return fwhm_two_photon(sigma_mm);
        case FitKind::kDualMzi:
            return fwhm_dual_mzi(sigma_mm);
    }
    throw std::logic_error("unknown fit kind");
}

double model_value(const FitModel &model, const FitParams &p, double x) {
    double n = p[FitParam::kNMax];
    double v1 = p[FitParam::kV1];
    double sigma = p[FitParam::kSigma];
    double u = x - p[FitParam::kX0];
    double s2 = sigma * sigma;
    switch (model.kind) {
        case FitKind::kOpi: {
            double c = std::cos(wave_number_per_mm(p[FitParam::kWavelength]) * u) * std::exp(-u * u / (2.0 * s2));
            return 0.5 * n * (1.0 + static_cast<int>(model.port) * v1 * c);
        }
        case FitKind::kTpi: {
            double v2 = p[FitParam::kV2];
            double c = std::cos(wave_number_per_mm(p[FitParam::kWavelength]) * u) * std::exp(-u * u / (2.0 * s2));
            return n * (1.0 + (v1 - v2) * c - v1 * v2 * c * c);
        }
        case FitKind::kHomDip:
        case FitKind::kHomPeak:
            return n * (1.0 + hom_sign(model.kind) * v1 * std::exp(-u * u / s2));
        case FitKind::kDualMzi:
            return n * (1.0 + v1 * std::exp(-u * u / (4.0 * s2)));
    }
    throw std::logic_error("unknown fit kind");
}

std::array<double, kFitParamCount> model_gradient(const FitModel &model, const FitParams &p, double x) {
    std::array<double, kFitParamCount> g{};
    auto at = [](FitParam q) {
        return static_cast<size_t>(q);
    };
    double n = p[FitParam::kNMax];
    double v1 = p[FitParam::kV1];
    double sigma = p[FitParam::kSigma];
    double u = x - p[FitParam::kX0];
    double s2 = sigma * sigma;
    if (oscillating(model.kind)) {
        double lambda = p[FitParam::kWavelength];
        double k = wave_number_per_mm(lambda);
        double env = std::exp(-u * u / (2.0 * s2));
        double cs = std::cos(k * u);
        double sn = std::sin(k * u);
        double c = cs * env;
        double dc_du = -k * sn * env - cs * env * u / s2;
        double dc_dsigma = c * u * u / (s2 * sigma);
        double dc_dlambda = sn * env * u * k / lambda;
        double dy_dc;
        if (model.kind == FitKind::kOpi) {
            double s = static_cast<int>(model.port);
            g[at(FitParam::kNMax)] = 0.5 * (1.0 + s * v1 * c);
            g[at(FitParam::kV1)] = 0.5 * n * s * c;
            dy_dc = 0.5 * n * s * v1;
        } else {
            double v2 = p[FitParam::kV2];
            g[at(FitParam::kNMax)] = 1.0 + (v1 - v2) * c - v1 * v2 * c * c;
            g[at(FitParam::kV1)] = n * (c - v2 * c * c);
            g[at(FitParam::kV2)] = n * (-c - v1 * c * c);
            dy_dc = n * ((v1 - v2) - 2.0 * v1 * v2 * c);
        }
        g[at(FitParam::kX0)] = -dy_dc * dc_du;
        g[at(FitParam::kSigma)] = dy_dc * dc_dsigma;
        g[at(FitParam::kWavelength)] = dy_dc * dc_dlambda;
        return g;
    }
    // h = exp(-u^2 / (scale sigma^2)) with scale 1 (HOM) or 4 (dual).
    double scale = model.kind == FitKind::kDualMzi ? 4.0 : 1.0;
    double sign = hom_sign(model.kind);
    double h = std::exp(-u * u / (scale * s2));
    g[at(FitParam::kNMax)] = 1.0 + sign * v1 * h;
    g[at(FitParam::kV1)] = n * sign * h;
    g[at(FitParam::kX0)] = n * sign * v1 * h * 2.0 * u / (scale * s2);
    g[at(FitParam::kSigma)] = n * sign * v1 * h * 2.0 * u * u / (scale * s2 * sigma);
    return g;
}

FitParams default_init(const FitData &data, const FitModel &model) {
    if (data.x.empty() || data.x.size() != data.y.size()) {
        throw InputError("default_init needs a nonempty scan");
    }
    FitParams p;
    auto [lo, hi] = std::minmax_element(data.x.begin(), data.x.end());
    double span = *hi - *lo;
    double center = 0.5 * (*lo + *hi);
    double lambda = model.wavelength_nm;
    p[FitParam::kWavelength] = lambda;

    if (oscillating(model.kind)) {
        double baseline = 0.0;
        for (double y : data.y) {
            baseline += y;
        }
        baseline /= static_cast<double>(data.y.size());
        // Envelope center from the deviation-weighted centroid, then the
        // fringe phase pins it down modulo one period.
        double sw = 0.0;
        double sx = 0.0;
        for (size_t i = 0; i < data.x.size(); ++i) {
            double d = data.y[i] - baseline;
            sw += d * d;
            sx += d * d * data.x[i];
        }
        double xc = sw > 0.0 ? sx / sw : center;
        double m2 = 0.0;
        for (size_t i = 0; i < data.x.size(); ++i) {
            double d = data.y[i] - baseline;
            m2 += d * d * (data.x[i] - xc) * (data.x[i] - xc);
        }
        m2 = sw > 0.0 ? m2 / sw : 0.0;
        double harmonic = model.kind == FitKind::kTpi ? 2.0 : 1.0;
        double k = harmonic * wave_number_per_mm(lambda);
        double cs = 0.0;
        double sn = 0.0;
        for (size_t i = 0; i < data.x.size(); ++i) {
            double d = data.y[i] - baseline;
            cs += d * std::cos(k * (data.x[i] - xc));
            sn += d * std::sin(k * (data.x[i] - xc));
        }
        double x0 = xc;
        if (cs != 0.0 || sn != 0.0) {
            double phase = std::atan2(sn, cs);
            if (model.kind == FitKind::kTpi) {
                // The 2k term enters with a negative sign (fringe minimum at
                // the center).
                phase = std::atan2(-sn, -cs);
            } else if (model.port == PortSign::kMinus) {
                phase = std::atan2(-sn, -cs);
            }
            x0 = xc + phase / k;
        }
        p[FitParam::kX0] = clamp_to(x0, *lo, *hi);
        double sigma = model.kind == FitKind::kTpi ? 2.0 * std::sqrt(m2) : std::sqrt(2.0 * m2);
        if (!(sigma > 0.0)) {
            sigma = span / 8.0;
        }
        p[FitParam::kSigma] = sigma;
        double ymax = *std::max_element(data.y.begin(), data.y.end());
        double ymin = *std::min_element(data.y.begin(), data.y.end());
        if (model.kind == FitKind::kOpi) {
            double half = 0.5 * (ymax + ymin);
            double far = data.y.size() >= 5 ? outer_baseline(data) : half;
            double level = std::abs(far - half) < 0.25 * (ymax - ymin) ? far : half;
            p[FitParam::kNMax] = 2.0 * level;
            p[FitParam::kV1] = level > 0.0 ? clamp_to((ymax - ymin) / (2.0 * level), 0.0, 1.0) : 0.0;
        } else {
            double far = outer_baseline(data);
            p[FitParam::kNMax] = far;
            double v = far > 0.0 ? std::sqrt(clamp_to((far - ymin) / far, 0.0, 1.0)) : 0.0;
            p[FitParam::kV1] = v;
            p[FitParam::kV2] = v;
        }
    } else {
        double baseline = outer_baseline(data);
        size_t peak = extreme_index(data, baseline);
        double dev = data.y[peak] - baseline;
        p[FitParam::kNMax] = baseline;
        p[FitParam::kX0] = data.x[peak];
        double v = baseline != 0.0 ? hom_sign(model.kind) * dev / baseline : 0.0;
        p[FitParam::kV1] = clamp_to(v, -1.0, 1.0);
        double width = half_deviation_width(data, baseline, peak);
        // FWHM = 2 sigma sqrt(ln 2) for g^2, 4 sigma sqrt(ln 2) for the dual
        // envelope.
        double per_sigma = (model.kind == FitKind::kDualMzi ? 4.0 : 2.0) * std::sqrt(std::log(2.0));
        double sigma = width / per_sigma;
        if (!(sigma > 0.0)) {
            sigma = span / 8.0;
        }
        if (!(sigma > 0.0)) {
            sigma = 1.0;
        }
        p[FitParam::kSigma] = sigma;
    }
    for (const auto &[q, value] : model.pinned) {
        p[q] = value;
    }
    return p;
}

FitResult fit(const FitData &data, const FitModel &model, std::optional<FitParams> init) {
    check_data(data, model);
    FitParams start = init ? *init : default_init(data, model);
    for (const auto &[q, value] : model.pinned) {
        start[q] = value;
    }
    if (!model.uses(FitParam::kWavelength) || !model.is_free(FitParam::kWavelength)) {
        if (!model.pinned.count(FitParam::kWavelength)) {
            start[FitParam::kWavelength] = model.wavelength_nm;
        }
    }
    if (!model.uses(FitParam::kV2)) {
        start[FitParam::kV2] = 0.0;
    }
    FitResult best = run_lm(data, model, start);
    if (oscillating(model.kind) && model.is_free(FitParam::kX0) && !init) {
        // The fringe phase fixes x0 only modulo a period; try neighbouring
        // fringes and keep the best.
        double period = start[FitParam::kWavelength] * 1e-6 / (model.kind == FitKind::kTpi ? 2.0 : 1.0);
        for (int shift : {-2, -1, 1, 2}) {
            FitParams alt = start;
            alt[FitParam::kX0] += shift * period;
            FitResult r = run_lm(data, model, alt);
            if (r.rss < best.rss) {
                best = r;
            }
        }
    }
    return best;
}

double visibility(const FitResult &result) {
    const FitModel &model = result.model;
    const FitParams &p = result.params;
    if (!oscillating(model.kind)) {
        return p[FitParam::kV1];
    }
    double lambda_mm = p[FitParam::kWavelength] * 1e-6;
    double ymax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 2000;
    for (int i = 0; i <= kSamples; ++i) {
        double x = p[FitParam::kX0] + lambda_mm * (2.0 * i / kSamples - 1.0);
        double y = model_value(model, p, x);
        ymax = std::max(ymax, y);
        ymin = std::min(ymin, y);
    }
    if (ymax + ymin == 0.0) {
        throw std::domain_error("visibility undefined for a zero signal");
    }
    return (ymax - ymin) / (ymax + ymin);
}

double visibility(const FitData &data, FitKind kind) {
    if (data.x.empty() || data.x.size() != data.y.size()) {
        throw InputError("visibility needs a nonempty scan");
    }
    double baseline = outer_baseline(data);
    if (baseline == 0.0) {
        throw std::domain_error("visibility undefined for a zero baseline");
    }
    size_t peak = extreme_index(data, baseline);
    if (!oscillating(kind)) {
        return hom_sign(kind) * (data.y[peak] - baseline) / baseline;
    }
    // One wavelength each side of the extreme; default 775 nm when the
    // caller gives no model.
    double reach = 775e-6;
    double ymax = -std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < data.x.size(); ++i) {
        if (std::abs(data.x[i] - data.x[peak]) <= reach) {
            ymax = std::max(ymax, data.y[i]);
            ymin = std::min(ymin, data.y[i]);
        }
    }
    if (ymax == ymin) {
        ymax = *std::max_element(data.y.begin(), data.y.end());
        ymin = *std::min_element(data.y.begin(), data.y.end());
    }
    if (ymax + ymin == 0.0) {
        throw std::domain_error("visibility undefined for a zero signal");
    }
    return (ymax - ymin) / (ymax + ymin);
}

}  // namespace wcpi
