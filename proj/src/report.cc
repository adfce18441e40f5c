// Copyright 2026 The dpfair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "dpfair/report.h"

#include <filesystem>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace dpfair {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json Optional(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json SummaryJson(const MetricSummary& s) {
  return {{"mean", Optional(s.mean)},
          {"std", Optional(s.std)},
          {"stderr", Optional(s.stderr_)},
          {"count", s.count},
          {"flagged", s.flagged}};
}

void AppendRound(std::string& out, const std::string& dataset, const RoundResult& r,
                 const std::string& epsilon) {
  const std::string prefix =
      absl::StrCat(dataset, ",", r.synthesizer, ",", epsilon, ",", r.round, ",");
  if (r.failed) {
    absl::StrAppend(&out, prefix, "failed,1\n");
    return;
  }
  absl::StrAppend(&out, prefix, "degenerate,", r.degenerate ? 1 : 0, "\n");
  for (size_t k = 0; k < r.epsilon_spent.size(); ++k) {
    absl::StrAppend(&out, prefix, "epsilon_spent", k == 0 ? "" : absl::StrCat("_", k),
                    ",", FormatValue(r.epsilon_spent[k]), "\n");
  }
  for (const auto& [name, value] : r.metrics) {
    absl::StrAppend(&out, prefix, name, ",", FormatValue(value), "\n");
  }
}

std::set<std::string> MetricNames(const BenchmarkReport& report) {
  std::set<std::string> names;
  for (const CellSummary& cell : report.cells) {
    for (const auto& [name, summary] : cell.metrics) names.insert(name);
  }
  return names;
}

}  // namespace

std::string FormatValue(std::optional<double> value) {
  return value ? absl::StrFormat("%.17g", *value) : "NA";
}

std::string RoundsCsv(const BenchmarkReport& report) {
  std::string out = "dataset,synthesizer,epsilon,round,metric,value\n";
  AppendRound(out, report.dataset, report.baseline, "NA");
  for (const RoundResult& r : report.rounds) {
    AppendRound(out, report.dataset, r, FormatValue(r.epsilon));
  }
  return out;
}

json ReportJson(const BenchmarkReport& report) {
  json baseline = json::object();
  for (const auto& [name, value] : report.baseline.metrics) baseline[name] = Optional(value);
  json cells = json::array();
  for (const CellSummary& cell : report.cells) {
    json metrics = json::object();
    for (const auto& [name, summary] : cell.metrics) metrics[name] = SummaryJson(summary);
    cells.push_back({{"synthesizer", cell.synthesizer},
                     {"epsilon", cell.epsilon},
                     {"rounds", cell.rounds},
                     {"failed", cell.failed},
                     {"degenerate_rounds", cell.degenerate_rounds},
                     {"budget_error", cell.budget_error},
                     {"metrics", metrics}});
  }
  json rankings = json::object();
  for (const char* task : kRankTasks) {
    json per_epsilon = json::object();
    for (double epsilon : report.config.epsilons) {
      absl::StatusOr<std::vector<std::string>> order =
          RankSynthesizers(report, task, epsilon);
      if (order.ok()) per_epsilon[FormatValue(epsilon)] = *order;
    }
    rankings[task] = per_epsilon;
  }
  return {{"format", "dpfair-report-v1"},
          {"dataset", report.dataset},
          {"config", ConfigToJson(report.config)},
          {"train_size", report.train_size},
          {"test_size", report.test_size},
          {"failed_rounds", report.failed_rounds},
          {"baseline",
           {{"failed", report.baseline.failed},
            {"degenerate", report.baseline.degenerate},
            {"metrics", baseline}}},
          {"cells", cells},
          {"rankings", rankings}};
}

std::string SeriesCsv(const BenchmarkReport& report, const std::string& metric) {
  std::string out = "synthesizer,epsilon,mean,std,stderr,count,flagged\n";
  for (const CellSummary& cell : report.cells) {
    auto it = cell.metrics.find(metric);
    const MetricSummary summary = it == cell.metrics.end() ? MetricSummary{} : it->second;
    absl::StrAppend(&out, cell.synthesizer, ",", FormatValue(cell.epsilon), ",",
                    FormatValue(summary.mean), ",", FormatValue(summary.std), ",",
                    FormatValue(summary.stderr_), ",", summary.count, ",",
                    summary.flagged, "\n");
  }
  return out;
}

absl::Status WriteReport(const BenchmarkReport& report, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(fs::path(dir) / "series", ec);
  if (ec) {
    return absl::InternalError(absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  if (absl::Status s = WriteFile((fs::path(dir) / "rounds.csv").string(), RoundsCsv(report));
      !s.ok()) {
    return s;
  }
  if (absl::Status s = WriteFile((fs::path(dir) / "report.json").string(),
                                 ReportJson(report).dump(2) + "\n");
      !s.ok()) {
    return s;
  }
  for (const std::string& metric : MetricNames(report)) {
    if (absl::Status s =
            WriteFile((fs::path(dir) / "series" / (metric + ".csv")).string(),
                      SeriesCsv(report, metric));
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

}  // namespace dpfair
