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

#ifndef WCPI_ERRORS_H
#define WCPI_ERRORS_H

#include <stdexcept>
#include <string>

namespace wcpi {

// Error taxonomy shared by the core. The C API maps each type onto a status
// code; std::domain_error is used directly for out-of-domain math arguments.

/// A scenario or run configuration violates an invariant.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input data (unordered tag streams, missing CSV columns, ...).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A name (builtin scenario, model kind, column) was not found.
struct LookupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wcpi

#endif
