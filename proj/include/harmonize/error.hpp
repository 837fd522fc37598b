/*
 * Copyright 2026 The Harmonize Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HARMONIZE_ERROR_HPP_
#define HARMONIZE_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace harmonize {

// Root of every error the library raises. The CLI maps subclasses onto exit
// codes: configuration/data problems exit 2, training/runtime problems exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad parameters, missing columns, dimension mismatches between components.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Undefined metric (e.g. a no-privacy baseline equal to chance).
class MetricError : public Error {
 public:
  using Error::Error;
};

// No harmonization iteration satisfied the requested constraints.
class SelectionError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant: stale caches, NaN gradients.
class InternalError : public Error {
 public:
  using Error::Error;
};

// Adversarial training diverged. Carries the harmonization iteration when the
// failure happened inside a run.
class TrainingError : public Error {
 public:
  explicit TrainingError(const std::string& what,
                         std::optional<int> iteration = std::nullopt)
      : Error(iteration ? what + " (iteration " + std::to_string(*iteration) +
                              ")"
                        : what),
        iteration_(iteration) {}

  std::optional<int> iteration() const { return iteration_; }

 private:
  std::optional<int> iteration_;
};

}  // namespace harmonize

#endif  // HARMONIZE_ERROR_HPP_
