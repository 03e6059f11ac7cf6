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

#include "uamqa/tensor.hpp"

namespace uamqa {

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

NoWeldDetected::NoWeldDetected(double max_temperature_c, double threshold_c)
    : DataError("no weld detected: clip maximum " +
                std::to_string(max_temperature_c) +
                " C never reaches the threshold " +
                std::to_string(threshold_c) + " C"),
      max_temperature_c_(max_temperature_c) {}

}  // namespace uamqa
