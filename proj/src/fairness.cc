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


#include "dpfair/fairness.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace dpfair {
namespace {

std::optional<double> Ratio(size_t num, size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

absl::Status CheckBinary(std::span<const int> values, std::string_view name) {
  for (int v : values) {
    if (v != 0 && v != 1) {
      return absl::InvalidArgumentError(absl::StrCat(std::string(name), " must be 0 or 1"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::pair<GroupStats, GroupStats>> Count(
    std::span<const int> predictions, std::span<const int> labels,
    std::span<const int> groups) {
  if (predictions.size() != labels.size() || labels.size() != groups.size()) {
    return absl::InvalidArgumentError("predictions, labels and groups differ in length");
  }
  if (absl::Status s = CheckBinary(predictions, "predictions"); !s.ok()) return s;
  if (absl::Status s = CheckBinary(labels, "labels"); !s.ok()) return s;
  if (absl::Status s = CheckBinary(groups, "groups"); !s.ok()) return s;
  GroupStats stats[2];
  for (size_t i = 0; i < predictions.size(); ++i) {
    GroupStats& g = stats[groups[i]];
    if (labels[i] == 1) {
      ++(predictions[i] == 1 ? g.tp : g.fn);
    } else {
      ++(predictions[i] == 1 ? g.fp : g.tn);
    }
  }
  if (stats[0].size() == 0 || stats[1].size() == 0) {
    return absl::InvalidArgumentError("both groups must be present");
  }
  return std::make_pair(stats[1], stats[0]);
}

}  // namespace

std::optional<double> GroupStats::Tpr() const { return Ratio(tp, tp + fn); }
std::optional<double> GroupStats::Ppv() const { return Ratio(tp, tp + fp); }
std::optional<double> GroupStats::Accuracy() const { return Ratio(tp + tn, size()); }
std::optional<double> GroupStats::PositiveRate() const { return Ratio(tp + fp, size()); }
std::optional<double> GroupStats::LabelRate() const { return Ratio(tp + fn, size()); }

absl::StatusOr<FairnessReport> Evaluate(std::span<const int> predictions,
                                        std::span<const int> labels,
                                        std::span<const int> groups) {
  absl::StatusOr<std::pair<GroupStats, GroupStats>> counts =
      Count(predictions, labels, groups);
  if (!counts.ok()) return counts.status();
  FairnessReport report;
  report.privileged = counts->first;
  report.minority = counts->second;
  report.dsp_signed =
      *report.privileged.PositiveRate() - *report.minority.PositiveRate();
  report.dsp_abs = std::abs(report.dsp_signed);
  const std::optional<double> tpr_priv = report.privileged.Tpr();
  const std::optional<double> tpr_min = report.minority.Tpr();
  if (tpr_priv && tpr_min) {
    report.deo_signed = *tpr_priv - *tpr_min;
    report.deo_abs = std::abs(*report.deo_signed);
  }
  report.label_ratio = {*report.privileged.LabelRate(), *report.minority.LabelRate()};
  return report;
}

absl::StatusOr<GroupValues> SubgroupAccuracy(std::span<const int> predictions,
                                             std::span<const int> labels,
                                             std::span<const int> groups) {
  absl::StatusOr<std::pair<GroupStats, GroupStats>> counts =
      Count(predictions, labels, groups);
  if (!counts.ok()) return counts.status();
  return GroupValues{*counts->first.Accuracy(), *counts->second.Accuracy()};
}

absl::StatusOr<GroupValues> PositiveLabelRatio(const Dataset& data) {
  size_t size[2] = {0, 0};
  size_t positive[2] = {0, 0};
  for (size_t i = 0; i < data.size(); ++i) {
    ++size[data.group(i)];
    positive[data.group(i)] += static_cast<size_t>(data.label(i));
  }
  if (size[0] == 0 || size[1] == 0) {
    return absl::InvalidArgumentError("both groups must be present");
  }
  return GroupValues{static_cast<double>(positive[1]) / static_cast<double>(size[1]),
                     static_cast<double>(positive[0]) / static_cast<double>(size[0])};
}

nlohmann::json ReportToJson(const FairnessReport& report) {
  auto optional = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  auto group = [&](const GroupStats& g) {
    return nlohmann::json{{"tp", g.tp},
                          {"fp", g.fp},
                          {"tn", g.tn},
                          {"fn", g.fn},
                          {"tpr", optional(g.Tpr())},
                          {"ppv", optional(g.Ppv())},
                          {"accuracy", optional(g.Accuracy())},
                          {"positive_rate", optional(g.PositiveRate())}};
  };
  return {{"dsp_signed", report.dsp_signed},
          {"dsp_abs", report.dsp_abs},
          {"deo_signed", optional(report.deo_signed)},
          {"deo_abs", optional(report.deo_abs)},
          {"privileged", group(report.privileged)},
          {"minority", group(report.minority)},
          {"label_ratio",
           {{"privileged", report.label_ratio.privileged},
            {"minority", report.label_ratio.minority}}}};
}

absl::StatusOr<MassageResult> MassageLabels(const Dataset& data,
                                            const LogisticModel& ranker) {
  absl::StatusOr<std::vector<double>> scores = PredictDataset(ranker, data);
  if (!scores.ok()) return scores.status();
  const Schema& schema = data.schema();
  const size_t n = data.size();
  size_t size[2] = {0, 0};
  size_t positive[2] = {0, 0};
  for (size_t i = 0; i < n; ++i) {
    ++size[data.group(i)];
    positive[data.group(i)] += static_cast<size_t>(data.label(i));
  }
  if (size[0] == 0 || size[1] == 0) {
    return absl::InvalidArgumentError("both groups must be present");
  }
  // |gap| * n_min * n_priv / n = |pos_priv * n_min - pos_min * n_priv| / n,
  // kept in integers so the ceiling is exact.
  const long long cross = static_cast<long long>(positive[1] * size[0]) -
                          static_cast<long long>(positive[0] * size[1]);
  const size_t numerator = static_cast<size_t>(std::llabs(cross));
  const size_t m = (numerator + n - 1) / n;

  MassageResult result{data, m, 0, 0, 0, cross >= 0};
  if (m == 0) return result;
  // Group whose negatives are promoted, and group whose positives are demoted.
  const int promote_group = result.promote_minority ? 0 : 1;
  const int demote_group = 1 - promote_group;

  std::vector<size_t> promote, demote;
  for (size_t i = 0; i < n; ++i) {
    if (data.group(i) == promote_group && data.label(i) == 0) promote.push_back(i);
    if (data.group(i) == demote_group && data.label(i) == 1) demote.push_back(i);
  }
  std::stable_sort(promote.begin(), promote.end(),
                   [&](size_t a, size_t b) { return (*scores)[a] > (*scores)[b]; });
  std::stable_sort(demote.begin(), demote.end(),
                   [&](size_t a, size_t b) { return (*scores)[a] < (*scores)[b]; });
  result.promoted = std::min(m, promote.size());
  result.demoted = std::min(m, demote.size());
  result.shortfall = (m - result.promoted) + (m - result.demoted);

  const int label = schema.label_attribute();
  const int positive_value = schema.positive_value();
  const int negative_value = 1 - positive_value;
  std::vector<int> cells = data.cells();
  const size_t width = static_cast<size_t>(data.width());
  for (size_t k = 0; k < result.promoted; ++k) {
    cells[promote[k] * width + label] = positive_value;
  }
  for (size_t k = 0; k < result.demoted; ++k) {
    cells[demote[k] * width + label] = negative_value;
  }
  absl::StatusOr<Dataset> massaged = Dataset::Create(data.shared_schema(), std::move(cells));
  if (!massaged.ok()) return massaged.status();
  result.data = *std::move(massaged);
  return result;
}

}  // namespace dpfair
