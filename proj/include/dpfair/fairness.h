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


// Group fairness metrics and label massaging.
//
// Groups are encoded 1 = privileged, 0 = minority. Signed gaps are
// privileged minus minority: a positive DSP means the privileged group
// receives positive predictions more often.

#ifndef DPFAIR_FAIRNESS_H_
#define DPFAIR_FAIRNESS_H_

#include <cstddef>
#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "dpfair/classifier.h"
#include "dpfair/data.h"
#include "json.hpp"

namespace dpfair {

struct GroupStats {
  size_t tp = 0;
  size_t fp = 0;
  size_t tn = 0;
  size_t fn = 0;

  size_t size() const { return tp + fp + tn + fn; }
  // Each rate is nullopt when its denominator is zero.
  std::optional<double> Tpr() const;
  std::optional<double> Ppv() const;
  std::optional<double> Accuracy() const;
  std::optional<double> PositiveRate() const;
  std::optional<double> LabelRate() const;
};

struct GroupValues {
  double privileged = 0.0;
  double minority = 0.0;
};

struct FairnessReport {
  GroupStats privileged;
  GroupStats minority;
  double dsp_signed = 0.0;
  double dsp_abs = 0.0;
  // Undefined when either group has no positive labels.
  std::optional<double> deo_signed;
  std::optional<double> deo_abs;
  // Positive-label fraction of the evaluated data, per group.
  GroupValues label_ratio;
};

// Exact counts. Fails on length mismatch, non-binary entries, or when either
// group is empty.
absl::StatusOr<FairnessReport> Evaluate(std::span<const int> predictions,
                                        std::span<const int> labels,
                                        std::span<const int> groups);

absl::StatusOr<GroupValues> SubgroupAccuracy(std::span<const int> predictions,
                                             std::span<const int> labels,
                                             std::span<const int> groups);

absl::StatusOr<GroupValues> PositiveLabelRatio(const Dataset& data);

nlohmann::json ReportToJson(const FairnessReport& report);

struct MassageResult {
  Dataset data;
  // Flips planned in each direction.
  size_t m = 0;
  size_t promoted = 0;
  size_t demoted = 0;
  // Planned flips that had no candidate, summed over both directions.
  size_t shortfall = 0;
  // True when minority negatives are promoted (the usual case); false when
  // the data favors the minority and the roles are mirrored.
  bool promote_minority = true;
};

// Removes the label-rate gap by flipping M = ceil(|gap| n_min n_priv / n)
// labels each way. The disfavored group's negatives with the highest ranker
// scores are promoted and the favored group's positives with the lowest
// scores are demoted; ties keep row order. `ranker` must be trained on
// OneHot(data) of the same schema.
absl::StatusOr<MassageResult> MassageLabels(const Dataset& data,
                                            const LogisticModel& ranker);

}  // namespace dpfair

#endif  // DPFAIR_FAIRNESS_H_
