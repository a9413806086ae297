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

#include "wcpi/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "wcpi/errors.h"

namespace wcpi {

namespace {

constexpr std::string_view kExposureColumn = "exposure_s";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    return s;
}

std::ofstream open_out(const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    return out;
}

std::ifstream open_in(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read '" + path + "'");
    }
    return in;
}

void check_written(std::ostream &out, const std::string &path) {
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::string fixed2(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw InputError("not a number: '" + std::string(text) + "'");
    }
    return value;
}

void write_scan_csv(std::ostream &out, const FringeScan &scan) {
    bool exposure = !scan.exposure_s.empty();
    out << "dx_mm";
    for (const auto &c : scan.columns) {
        out << ',' << c.name;
    }
    if (exposure) {
        out << ',' << kExposureColumn;
    }
    out << '\n';
    for (size_t i = 0; i < scan.rows(); ++i) {
        out << format_number(scan.dx_mm[i]);
        for (const auto &c : scan.columns) {
            out << ',' << format_number(c.values[i]);
        }
        if (exposure) {
            out << ',' << format_number(scan.exposure_s[i]);
        }
        out << '\n';
    }
}

FringeScan read_scan_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw InputError("scan CSV is empty");
    }
    auto header = split_fields(trim(line));
    std::vector<std::string> names;
    for (auto h : header) {
        names.emplace_back(trim(h));
    }
    if (names.empty() || names[0] != "dx_mm") {
        throw InputError("scan CSV must start with a dx_mm column");
    }
    FringeScan scan;
    int exposure_col = -1;
    for (size_t k = 1; k < names.size(); ++k) {
        if (names[k] == kExposureColumn) {
            exposure_col = static_cast<int>(k);
        } else {
            if (scan.find(names[k]) != nullptr) {
                throw InputError("duplicate CSV column '" + names[k] + "'");
            }
            scan.columns.push_back({names[k], {}});
        }
    }
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        auto fields = split_fields(view);
        if (fields.size() != names.size()) {
            throw InputError("CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(names.size()));
        }
        scan.dx_mm.push_back(parse_number(fields[0]));
        size_t col = 0;
        for (size_t k = 1; k < fields.size(); ++k) {
            double v = parse_number(fields[k]);
            if (static_cast<int>(k) == exposure_col) {
                scan.exposure_s.push_back(v);
            } else {
                scan.columns[col++].values.push_back(v);
            }
        }
    }
    return scan;
}

void write_scan_csv_file(const std::string &path, const FringeScan &scan) {
    auto out = open_out(path);
    write_scan_csv(out, scan);
    check_written(out, path);
}

FringeScan read_scan_csv_file(const std::string &path) {
    auto in = open_in(path);
    return read_scan_csv(in);
}

void write_scan_svg(std::ostream &out, const FringeScan &scan) {
    constexpr double kWidth = 800;
    constexpr double kHeight = 500;
    constexpr double kLeft = 80;
    constexpr double kRight = 20;
    constexpr double kTop = 30;
    constexpr double kBottom = 60;
    static const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (scan.rows() > 0) {
        auto [lo, hi] = std::minmax_element(scan.dx_mm.begin(), scan.dx_mm.end());
        xmin = *lo;
        xmax = *hi;
        ymin = std::numeric_limits<double>::infinity();
        ymax = -ymin;
        for (const auto &c : scan.columns) {
            for (double v : c.values) {
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
        if (!std::isfinite(ymin)) {
            ymin = 0.0;
            ymax = 1.0;
        }
        ymin = std::min(ymin, 0.0);
    }
    if (xmax == xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax == ymin) {
        ymax = ymin + 1.0;
    }
    double pw = kWidth - kLeft - kRight;
    double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) {
        return kLeft + (x - xmin) / (xmax - xmin) * pw;
    };
    auto py = [&](double y) {
        return kTop + (ymax - y) / (ymax - ymin) * ph;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<title>" << scan.scenario << "</title>\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<g stroke=\"black\" fill=\"none\">\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i <= 4; ++i) {
        double xv = xmin + (xmax - xmin) * i / 4.0;
        double yv = ymin + (ymax - ymin) * i / 4.0;
        out << "<text x=\"" << fixed2(px(xv)) << "\" y=\"" << fixed2(kTop + ph + 18)
            << "\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
        out << "<text x=\"" << fixed2(kLeft - 6) << "\" y=\"" << fixed2(py(yv) + 4) << "\" text-anchor=\"end\">"
            << format_number(yv) << "</text>\n";
    }
    out << "<text x=\"" << fixed2(kLeft + pw / 2) << "\" y=\"" << fixed2(kHeight - 15)
        << "\" text-anchor=\"middle\">path difference dx (mm)</text>\n";
    out << "<text x=\"15\" y=\"" << fixed2(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 "
        << fixed2(kTop + ph / 2) << ")\">rate (Hz)</text>\n";
    out << "</g>\n";

    std::string xs;
    for (size_t i = 0; i < scan.rows(); ++i) {
        xs += (i ? " " : "") + format_number(scan.dx_mm[i]);
    }
    for (size_t k = 0; k < scan.columns.size(); ++k) {
        const auto &c = scan.columns[k];
        std::string ys;
        std::string pts;
        for (size_t i = 0; i < scan.rows(); ++i) {
            ys += (i ? " " : "") + format_number(c.values[i]);
            pts += (i ? " " : "") + fixed2(px(scan.dx_mm[i])) + "," + fixed2(py(c.values[i]));
        }
        const char *color = kColors[k % std::size(kColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" data-column=\"" << c.name
            << "\" data-x=\"" << xs << "\" data-y=\"" << ys << "\" points=\"" << pts << "\"/>\n";
        out << "<text font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\" x=\""
            << fixed2(kLeft + 10) << "\" y=\"" << fixed2(kTop + 16 + 15 * static_cast<double>(k)) << "\">" << c.name
            << "</text>\n";
    }
    out << "</svg>\n";
}

void write_scan_svg_file(const std::string &path, const FringeScan &scan) {
    auto out = open_out(path);
    write_scan_svg(out, scan);
    check_written(out, path);
}

void write_tags_csv(std::ostream &out, const std::vector<TimeTag> &tags) {
    out << "channel,time_ps\n";
    for (const auto &t : tags) {
        out << t.channel << ',' << t.time_ps << '\n';
    }
}

std::vector<TimeTag> read_tags_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "channel,time_ps") {
        throw InputError("tag CSV must start with the header 'channel,time_ps'");
    }
    std::vector<TimeTag> tags;
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        std::string_view view = trim(line);
        if (view.empty()) {
            continue;
        }
        auto fields = split_fields(view);
        if (fields.size() != 2) {
            throw InputError("tag CSV row " + std::to_string(row) + " needs two fields");
        }
        TimeTag t;
        auto f0 = trim(fields[0]);
        auto f1 = trim(fields[1]);
        auto r0 = std::from_chars(f0.data(), f0.data() + f0.size(), t.channel);
        auto r1 = std::from_chars(f1.data(), f1.data() + f1.size(), t.time_ps);
        if (r0.ec != std::errc() || r0.ptr != f0.data() + f0.size() || r1.ec != std::errc() ||
            r1.ptr != f1.data() + f1.size() || t.time_ps < 0) {
            throw InputError("bad tag CSV row " + std::to_string(row));
        }
        tags.push_back(t);
    }
    return tags;
}

void write_tags_csv_file(const std::string &path, const std::vector<TimeTag> &tags) {
    auto out = open_out(path);
    write_tags_csv(out, tags);
    check_written(out, path);
}

std::vector<TimeTag> read_tags_csv_file(const std::string &path) {
    auto in = open_in(path);
    return read_tags_csv(in);
}

ChannelStreams split_channels(const std::vector<TimeTag> &tags) {
    ChannelStreams streams;
    for (const auto &t : tags) {
        streams[t.channel].push_back(t.time_ps);
    }
    for (auto &[ch, s] : streams) {
        std::sort(s.begin(), s.end());
    }
    return streams;
}

std::string fit_result_json(const FitResult &r) {
    using nlohmann::ordered_json;
    auto number = [](double v) {
        return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
    };
    ordered_json j;
    j["model"] = std::string(to_string(r.model.kind));
    if (r.model.kind == FitKind::kOpi) {
        j["port"] = static_cast<int>(r.model.port);
    }
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["points"] = r.points;
    ordered_json params = ordered_json::object();
    ordered_json errors = ordered_json::object();
    for (size_t i = 0; i < kFitParamCount; ++i) {
        auto q = static_cast<FitParam>(i);
        if (!r.model.uses(q)) {
            continue;
        }
        std::string name(to_string(q));
        params[name] = number(r.params[q]);
        errors[name] = number(r.std_error[q]);
    }
    j["params"] = params;
    j["std_error"] = errors;
    ordered_json free = ordered_json::array();
    for (FitParam q : r.free_params) {
        free.push_back(std::string(to_string(q)));
    }
    j["free"] = free;
    j["fwhm_mm"] = number(r.fwhm_mm);
    j["visibility"] = number(r.visibility);
    j["rss"] = number(r.rss);
    return j.dump(2);
}

}  // namespace wcpi
