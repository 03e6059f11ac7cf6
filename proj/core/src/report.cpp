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

#include "uamqa/report.hpp"

#include <cstdio>

#include "uamqa/errors.hpp"
#include "uamqa/io.hpp"
#include "uamqa/trainer.hpp"

namespace uamqa {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<PublishedRow>& published_results() {
  static const std::vector<PublishedRow> rows{
      {"model_1", 98.29, 0.0903, 13126978},
      {"model_2", 97.10, 0.0225, 13127235},
      {"model_3", 97.43, 0.0115, 13127365},
      {"model_4", 97.26, 0.0061, 13128010},
  };
  return rows;
}

ReportRow report_row_from_json(const json& summary, const std::string& source) {
  try {
    ReportRow r;
    r.source = source;
    r.scenario = summary.at("scenario").get<std::string>();
    r.num_classes = summary.at("num_classes").get<std::size_t>();
    r.param_count = summary.at("param_count").get<std::size_t>();
    r.final_accuracy = summary.at("final_accuracy").get<double>();
    r.final_loss = summary.at("final_loss").get<double>();
    if (!(r.final_accuracy >= 0.0 && r.final_accuracy <= 1.0)) {
      throw DataError("final_accuracy " + std::to_string(r.final_accuracy) +
                      " outside [0, 1]");
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(source + ": malformed summary: " + e.what());
  } catch (const DataError& e) {
    throw DataError(source + ": " + e.what());
  }
}

std::vector<ReportRow> read_summaries(const std::vector<fs::path>& paths) {
  if (paths.empty()) throw ConfigError("report needs at least one summary");
  std::vector<ReportRow> rows;
  for (fs::path p : paths) {
    if (fs::is_directory(p)) p /= kSummaryFile;
    json j;
    try {
      j = json::parse(read_file_text(p));
    } catch (const json::exception& e) {
      throw DataError(p.string() + ": malformed summary: " + e.what());
    }
    rows.push_back(report_row_from_json(j, p.string()));
  }
  return rows;
}

namespace {

std::string grouped(std::size_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

std::string format_report(const std::vector<ReportRow>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %8s %12s %10s %12s %16s\n", "scenario",
                "classes", "#parameters", "accuracy", "final_loss", "published_params");
  out += line;
  std::vector<std::string> notes;
  for (const ReportRow& r : rows) {
    std::string published = "-";
    for (const PublishedRow& p : published_results()) {
      if (r.scenario != p.scenario) continue;
      published = grouped(p.param_count);
      if (p.param_count != r.param_count) {
        published += "*";
        notes.push_back(
            r.scenario + ": the published count " + grouped(p.param_count) +
            " is inconsistent with the architecture; 13,126,720 + 129 x " +
            std::to_string(r.num_classes) + " = " + grouped(r.param_count) +
            " (a 5-class head cannot differ from model_3's)");
      }
    }
    std::snprintf(line, sizeof line, "%-10s %8zu %12s %10.4f %12.6f %16s\n",
                  r.scenario.c_str(), r.num_classes, grouped(r.param_count).c_str(),
                  r.final_accuracy, r.final_loss, published.c_str());
    out += line;
  }
  for (const auto& n : notes) out += "* " + n + "\n";
  return out;
}

}  // namespace uamqa
