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

#include "wcpi/fringe_scan.h"

#include <cmath>
#include <stdexcept>

#include "wcpi/errors.h"

namespace wcpi {

const ScanColumn *FringeScan::find(std::string_view name) const {
    for (const auto &c : columns) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

ScanColumn *FringeScan::find(std::string_view name) {
    for (auto &c : columns) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

const std::vector<double> &FringeScan::column(std::string_view name) const {
    const ScanColumn *c = find(name);
    if (c == nullptr) {
        throw LookupError("scan has no column '" + std::string(name) + "'");
    }
    return c->values;
}

ScanColumn &FringeScan::add_column(std::string name) {
    if (find(name) != nullptr) {
        throw ConfigError("duplicate scan column '" + name + "'");
    }
    columns.push_back({std::move(name), std::vector<double>(rows(), 0.0)});
    return columns.back();
}

std::vector<double> make_grid(double start_mm, double stop_mm, double step_mm) {
    if (!(step_mm > 0.0) || !std::isfinite(step_mm)) {
        throw std::domain_error("grid step must be positive");
    }
    if (!std::isfinite(start_mm) || !std::isfinite(stop_mm)) {
        throw std::domain_error("grid bounds must be finite");
    }
    std::vector<double> grid;
    if (start_mm > stop_mm) {
        return grid;
    }
    auto count = static_cast<size_t>(std::floor((stop_mm - start_mm) / step_mm + 1e-9)) + 1;
    grid.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        grid.push_back(start_mm + static_cast<double>(i) * step_mm);
    }
    return grid;
}

void require_valid_grid(const std::vector<double> &grid) {
    if (grid.empty()) {
        throw ConfigError("grid is empty");
    }
    for (double x : grid) {
        if (!std::isfinite(x)) {
            throw ConfigError("grid contains a non-finite value");
        }
    }
    if (grid.size() < 2) {
        return;
    }
    bool increasing = grid[1] > grid[0];
    for (size_t i = 1; i < grid.size(); ++i) {
        bool ok = increasing ? grid[i] > grid[i - 1] : grid[i] < grid[i - 1];
        if (!ok) {
            throw ConfigError("grid must be strictly monotone");
        }
    }
}

}  // namespace wcpi
