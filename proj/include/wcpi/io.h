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

#ifndef WCPI_IO_H
#define WCPI_IO_H

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wcpi/fringe_fit.h"
#include "wcpi/fringe_scan.h"
#include "wcpi/mc_engine.h"

namespace wcpi {

/// Shortest decimal that reads back to the same double ('.' separator, no
/// grouping).
std::string format_number(double value);
/// Throws InputError on anything that is not a complete number.
double parse_number(std::string_view text);

/// Scan CSV: header "dx_mm,<columns...>[,exposure_s]", one row per point.
void write_scan_csv(std::ostream &out, const FringeScan &scan);
FringeScan read_scan_csv(std::istream &in);
/// File variants throw IoError when the file cannot be opened.
void write_scan_csv_file(const std::string &path, const FringeScan &scan);
FringeScan read_scan_csv_file(const std::string &path);

/// Line plot of every column against dx. Each polyline carries the plotted
/// values, formatted exactly as in the CSV, in data-x / data-y attributes.
void write_scan_svg(std::ostream &out, const FringeScan &scan);
void write_scan_svg_file(const std::string &path, const FringeScan &scan);

/// Tag dump: header "channel,time_ps", rows sorted by time.
void write_tags_csv(std::ostream &out, const std::vector<TimeTag> &tags);
std::vector<TimeTag> read_tags_csv(std::istream &in);
void write_tags_csv_file(const std::string &path, const std::vector<TimeTag> &tags);
std::vector<TimeTag> read_tags_csv_file(const std::string &path);
/// Splits a tag list into per-channel streams (each sorted).
ChannelStreams split_channels(const std::vector<TimeTag> &tags);

std::string fit_result_json(const FitResult &result);

}  // namespace wcpi

#endif
