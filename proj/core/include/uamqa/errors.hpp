// Copyright 2026 The uamqa Authors
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

namespace uamqa {

/// Base of every error thrown by the library. The CLI maps the concrete
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or geometry extents that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An API called out of order, e.g. backward without a cached forward.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values (flags, config files, hyperparameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing or malformed input data: files, manifests, clips.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A clip in which no frame reaches the weld threshold.
class NoWeldDetected : public DataError {
 public:
  NoWeldDetected(double max_temperature_c, double threshold_c);

  double max_temperature_c() const { return max_temperature_c_; }

 private:
  double max_temperature_c_;
};

/// Non-finite loss or activations during training.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace uamqa
