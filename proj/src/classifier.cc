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


#include "dpfair/classifier.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dpfair/random.h"

namespace dpfair {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Logit(std::span<const double> weights, double intercept,
             const FeatureMatrix& features, size_t i) {
  double z = intercept;
  for (int column : features.active(i)) z += weights[column];
  return z;
}

absl::Status CheckShapes(const FeatureMatrix& features, std::span<const int> labels) {
  if (features.rows() == 0) return absl::InvalidArgumentError("no training rows");
  if (features.width() < 1) return absl::InvalidArgumentError("no feature columns");
  if (labels.size() != features.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "got ", labels.size(), " labels for ", features.rows(), " rows"));
  }
  for (int y : labels) {
    if (y != 0 && y != 1) return absl::InvalidArgumentError("labels must be 0 or 1");
  }
  return absl::OkStatus();
}

}  // namespace

std::string FeatureLayout(const Schema& schema, bool exclude_label) {
  return absl::StrCat(schema.Fingerprint(), exclude_label ? "/nolabel" : "/all");
}

double Objective(std::span<const double> params, const FeatureMatrix& features,
                 std::span<const int> labels, double l2) {
  const size_t m = static_cast<size_t>(features.width());
  const std::span<const double> weights = params.first(m);
  const double intercept = params[m];
  double loss = 0.0;
  for (size_t i = 0; i < features.rows(); ++i) {
    const double z = Logit(weights, intercept, features, i);
    loss += Softplus(z) - labels[i] * z;
  }
  loss /= static_cast<double>(features.rows());
  double norm = 0.0;
  for (double w : weights) norm += w * w;
  return loss + 0.5 * l2 * norm;
}

std::vector<double> ObjectiveGradient(std::span<const double> params,
                                      const FeatureMatrix& features,
                                      std::span<const int> labels, double l2) {
  const size_t m = static_cast<size_t>(features.width());
  const std::span<const double> weights = params.first(m);
  std::vector<double> gradient(m + 1, 0.0);
  const double scale = 1.0 / static_cast<double>(features.rows());
  for (size_t i = 0; i < features.rows(); ++i) {
    const double residual =
        (Sigmoid(Logit(weights, params[m], features, i)) - labels[i]) * scale;
    for (int column : features.active(i)) gradient[column] += residual;
    gradient[m] += residual;
  }
  for (size_t j = 0; j < m; ++j) gradient[j] += l2 * weights[j];
  return gradient;
}

absl::StatusOr<LogisticModel> Train(const FeatureMatrix& features,
                                    std::span<const int> labels,
                                    const LogisticHyper& hyper, std::string layout) {
  if (absl::Status s = CheckShapes(features, labels); !s.ok()) return s;
  if (!(hyper.learning_rate > 0.0) || hyper.epochs < 0 || !(hyper.l2 >= 0.0)) {
    return absl::InvalidArgumentError("invalid logistic regression hyperparameters");
  }
  const size_t m = static_cast<size_t>(features.width());
  const size_t n = features.rows();
  const double scale = 1.0 / static_cast<double>(n);
  LogisticModel model;
  model.hyper = hyper;
  model.layout = std::move(layout);
  const size_t positives = static_cast<size_t>(std::count(labels.begin(), labels.end(), 1));
  model.constant_score_warning = positives == 0 || positives == n;

  std::vector<double> params(m + 1, 0.0);
  std::vector<double> gradient(m + 1);
  model.loss_history.reserve(hyper.epochs + 1);
  for (int epoch = 0; epoch <= hyper.epochs; ++epoch) {
    // One pass gives both the objective and the gradient at `params`.
    std::fill(gradient.begin(), gradient.end(), 0.0);
    double loss = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double z = params[m];
      const std::span<const int> active = features.active(i);
      for (int column : active) z += params[column];
      loss += Softplus(z) - labels[i] * z;
      const double residual = (Sigmoid(z) - labels[i]) * scale;
      for (int column : active) gradient[column] += residual;
      gradient[m] += residual;
    }
    double norm = 0.0;
    for (size_t j = 0; j < m; ++j) {
      norm += params[j] * params[j];
      gradient[j] += hyper.l2 * params[j];
    }
    model.loss_history.push_back(loss * scale + 0.5 * hyper.l2 * norm);
    if (epoch == hyper.epochs) break;
    for (size_t j = 0; j <= m; ++j) params[j] -= hyper.learning_rate * gradient[j];
  }
  model.intercept = params[m];
  params.pop_back();
  model.weights = std::move(params);
  return model;
}

absl::StatusOr<LogisticModel> TrainOnDataset(const Dataset& data,
                                             const LogisticHyper& hyper) {
  const OneHotData encoded = OneHot(data, /*exclude_label=*/true);
  return Train(encoded.features, encoded.labels, hyper,
               FeatureLayout(data.schema(), true));
}

absl::StatusOr<std::vector<double>> PredictProba(const LogisticModel& model,
                                                 const FeatureMatrix& features) {
  if (static_cast<size_t>(features.width()) != model.weights.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("feature width ", features.width(), " does not match model width ",
                     model.weights.size()));
  }
  std::vector<double> out(features.rows());
  for (size_t i = 0; i < features.rows(); ++i) {
    out[i] = Sigmoid(Logit(model.weights, model.intercept, features, i));
  }
  return out;
}

absl::StatusOr<std::vector<double>> PredictDataset(const LogisticModel& model,
                                                   const Dataset& data) {
  if (!model.layout.empty() && model.layout != FeatureLayout(data.schema(), true)) {
    return absl::InvalidArgumentError("dataset layout does not match the model");
  }
  return PredictProba(model, OneHot(data, true).features);
}

std::vector<int> Threshold(std::span<const double> scores, double threshold) {
  std::vector<int> out(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

absl::StatusOr<double> AucRoc(std::span<const double> scores,
                              std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    return absl::InvalidArgumentError("scores and labels differ in length");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  size_t positives = 0;
  for (size_t start = 0; start < order.size();) {
    size_t end = start;
    while (end < order.size() && scores[order[end]] == scores[order[start]]) ++end;
    // Ranks start..end-1 (1-based start+1..end) share their average.
    const double rank = 0.5 * static_cast<double>(start + 1 + end);
    for (size_t k = start; k < end; ++k) {
      if (labels[order[k]] == 1) {
        positive_rank_sum += rank;
        ++positives;
      }
    }
    start = end;
  }
  const size_t negatives = scores.size() - positives;
  if (positives == 0 || negatives == 0) {
    return absl::InvalidArgumentError("AUC needs both classes");
  }
  const double p = static_cast<double>(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) /
         (p * static_cast<double>(negatives));
}

double Accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.empty()) return 0.0;
  size_t correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    correct += predictions[i] == labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

nlohmann::json ModelToJson(const LogisticModel& model) {
  return {{"format", "dpfair-logistic-v1"},
          {"weights", model.weights},
          {"intercept", model.intercept},
          {"layout", model.layout},
          {"constant_score_warning", model.constant_score_warning},
          {"hyper",
           {{"learning_rate", model.hyper.learning_rate},
            {"epochs", model.hyper.epochs},
            {"l2", model.hyper.l2},
            {"threshold", model.hyper.threshold}}}};
}

absl::StatusOr<LogisticModel> LogisticModelFromJson(const nlohmann::json& json) {
  LogisticModel model;
  try {
    if (json.at("format").get<std::string>() != "dpfair-logistic-v1") {
      return absl::InvalidArgumentError("unsupported classifier format");
    }
    model.weights = json.at("weights").get<std::vector<double>>();
    model.intercept = json.at("intercept").get<double>();
    model.layout = json.at("layout").get<std::string>();
    model.constant_score_warning = json.at("constant_score_warning").get<bool>();
    const nlohmann::json& h = json.at("hyper");
    model.hyper.learning_rate = h.at("learning_rate").get<double>();
    model.hyper.epochs = h.at("epochs").get<int>();
    model.hyper.l2 = h.at("l2").get<double>();
    model.hyper.threshold = h.at("threshold").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad classifier json: ", e.what()));
  }
  return model;
}

}  // namespace dpfair
