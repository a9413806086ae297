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

#ifndef WCPI_FRINGE_SCAN_H
#define WCPI_FRINGE_SCAN_H

#include <string>
#include <string_view>
#include <vector>

namespace wcpi {

struct ScanColumn {
    std::string name;
    std::vector<double> values;
};

/// Rates recorded along a path-length-difference grid. Columns follow the
/// CSV naming: nd<ch>_hz for singles, n<label>_hz for coincidences, and an
/// analytic_ prefix for reference curves. `exposure_s` holds the acquisition
/// time per point for Monte Carlo scans and is empty for analytic ones.
struct FringeScan {
    std::string scenario;
    std::vector<double> dx_mm;
    std::vector<ScanColumn> columns;
    std::vector<double> exposure_s;

    size_t rows() const {
        return dx_mm.size();
    }

    const ScanColumn *find(std::string_view name) const;
    ScanColumn *find(std::string_view name);
    /// Throws LookupError if absent.
    const std::vector<double> &column(std::string_view name) const;
    ScanColumn &add_column(std::string name);
};

/// Points start + i*step for i = 0.. while <= stop (with a 1e-9 step slack).
/// Empty when start > stop; throws std::domain_error on a nonpositive step.
std::vector<double> make_grid(double start_mm, double stop_mm, double step_mm);

/// Throws ConfigError unless the grid is nonempty, finite and strictly monotone.
void require_valid_grid(const std::vector<double> &grid);

}  // namespace wcpi

#endif
