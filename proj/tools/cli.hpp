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

#include <iosfwd>
#include <string>
#include <vector>

namespace uamqa::cli {

/// Exit codes of the uamqa tool.
enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kConfigError = 2,  // bad flags, config file or hyperparameters
  kDataError = 3,    // missing or malformed inputs, no weld detected
  kNumericError = 4, // non-finite loss
};

/// Runs one invocation; args[0] is the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace uamqa::cli
