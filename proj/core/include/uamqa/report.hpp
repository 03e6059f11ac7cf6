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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace uamqa {

/// Published reference values for one scenario.
struct PublishedRow {
  const char* scenario;
  double accuracy_percent;
  double training_loss;
  std::size_t param_count;
};

/// The four rows of the published results table, as printed.
const std::vector<PublishedRow>& published_results();

struct ReportRow {
  std::string source;
  std::string scenario;
  std::size_t num_classes = 0;
  std::size_t param_count = 0;
  double final_accuracy = 0.0;
  double final_loss = 0.0;
};

/// Throws DataError naming `source` if a field is missing or mistyped.
ReportRow report_row_from_json(const nlohmann::json& summary,
                               const std::string& source);

/// Reads each summary.json; a directory is taken to contain one.
std::vector<ReportRow> read_summaries(const std::vector<std::filesystem::path>& paths);

/// Fixed-width table: scenario, #parameters, final accuracy, final loss, and
/// the published count next to ours. Rows whose published count disagrees
/// with the architecture get a footnote.
std::string format_report(const std::vector<ReportRow>& rows);

}  // namespace uamqa
