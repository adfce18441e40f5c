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


// Logistic regression on one-hot features, trained by full-batch gradient
// descent, and AUC-ROC.

#ifndef DPFAIR_CLASSIFIER_H_
#define DPFAIR_CLASSIFIER_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "json.hpp"

namespace dpfair {

struct LogisticHyper {
  double learning_rate = 0.5;
  int epochs = 500;
  double l2 = 1e-4;
  // Cut-off for label predictions.
  double threshold = 0.5;
};

struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;
  LogisticHyper hyper;
  // Identifies the one-hot layout the weights belong to; empty if unknown.
  std::string layout;
  // Set when the training labels were all one class.
  bool constant_score_warning = false;
  // Objective before each epoch, plus the final value.
  std::vector<double> loss_history;
};

// Fingerprint of the one-hot layout OneHot(schema data, exclude_label).
std::string FeatureLayout(const Schema& schema, bool exclude_label = true);

// Mean log-loss plus (l2 / 2) * |w|^2 (the intercept is not penalized).
// `params` holds the weights followed by the intercept.
double Objective(std::span<const double> params, const FeatureMatrix& features,
                 std::span<const int> labels, double l2);
std::vector<double> ObjectiveGradient(std::span<const double> params,
                                      const FeatureMatrix& features,
                                      std::span<const int> labels, double l2);

// Zero-initialized, fixed epoch count, so identical inputs give identical
// weights.
absl::StatusOr<LogisticModel> Train(const FeatureMatrix& features,
                                    std::span<const int> labels,
                                    const LogisticHyper& hyper,
                                    std::string layout = "");

// Trains on OneHot(data) and records the layout.
absl::StatusOr<LogisticModel> TrainOnDataset(const Dataset& data,
                                             const LogisticHyper& hyper);

absl::StatusOr<std::vector<double>> PredictProba(const LogisticModel& model,
                                                 const FeatureMatrix& features);
// Scores a dataset after checking the layout matches.
absl::StatusOr<std::vector<double>> PredictDataset(const LogisticModel& model,
                                                   const Dataset& data);

std::vector<int> Threshold(std::span<const double> scores, double threshold);

// Mann-Whitney: P(score_pos > score_neg) + P(tie) / 2.
absl::StatusOr<double> AucRoc(std::span<const double> scores,
                              std::span<const int> labels);

double Accuracy(std::span<const int> predictions, std::span<const int> labels);

nlohmann::json ModelToJson(const LogisticModel& model);
absl::StatusOr<LogisticModel> LogisticModelFromJson(const nlohmann::json& json);

}  // namespace dpfair

#endif  // DPFAIR_CLASSIFIER_H_
