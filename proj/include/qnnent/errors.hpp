// Copyright 2026 The qnnent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qnnent {

// A matrix that fails the density-matrix invariants beyond tolerance.
struct InvalidStateError : std::runtime_error {
  explicit InvalidStateError(const std::string& what) : std::runtime_error(what) {}
};

// Physicality projection left (almost) no probability mass.
struct DegenerateStateError : std::runtime_error {
  explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

// Too few samples for the requested fit.
struct InsufficientDataError : std::invalid_argument {
  explicit InsufficientDataError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qnnent
