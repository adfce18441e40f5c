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


#include "dpfair/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"

namespace dpfair {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string Resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

bool LooksLikePath(const std::string& s) {
  return s.find('/') != std::string::npos || s.ends_with(".json");
}

void Put(std::map<std::string, std::optional<double>>& metrics, const std::string& name,
         std::optional<double> value) {
  metrics[name] = value;
}

std::optional<double> Difference(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

// Scores `model` on `data` and records metrics with the given suffix.
// Returns the thresholded predictions.
std::vector<int> EvaluateInto(const LogisticModel& model, const Dataset& data,
                              const std::string& suffix,
                              std::map<std::string, std::optional<double>>& metrics) {
  const std::vector<double> scores = *PredictDataset(model, data);
  const std::vector<int> labels = data.Labels();
  const std::vector<int> groups = data.Groups();
  const std::vector<int> predictions = Threshold(scores, model.hyper.threshold);
  absl::StatusOr<double> auc = AucRoc(scores, labels);
  Put(metrics, "auc" + suffix, auc.ok() ? std::optional<double>(*auc) : std::nullopt);
  Put(metrics, "accuracy" + suffix,
      data.empty() ? std::nullopt : std::optional<double>(Accuracy(predictions, labels)));
  absl::StatusOr<FairnessReport> fairness = Evaluate(predictions, labels, groups);
  const char* names[] = {"dsp",          "deo",          "accuracy_priv", "accuracy_min",
                         "tpr_priv",     "tpr_min",      "ppv_priv",      "ppv_min",
                         "positive_rate_priv", "positive_rate_min"};
  if (!fairness.ok()) {
    for (const char* name : names) Put(metrics, name + suffix, std::nullopt);
    return predictions;
  }
  Put(metrics, "dsp" + suffix, fairness->dsp_signed);
  Put(metrics, "deo" + suffix, fairness->deo_signed);
  Put(metrics, "accuracy_priv" + suffix, fairness->privileged.Accuracy());
  Put(metrics, "accuracy_min" + suffix, fairness->minority.Accuracy());
  Put(metrics, "tpr_priv" + suffix, fairness->privileged.Tpr());
  Put(metrics, "tpr_min" + suffix, fairness->minority.Tpr());
  Put(metrics, "ppv_priv" + suffix, fairness->privileged.Ppv());
  Put(metrics, "ppv_min" + suffix, fairness->minority.Ppv());
  Put(metrics, "positive_rate_priv" + suffix, fairness->privileged.PositiveRate());
  Put(metrics, "positive_rate_min" + suffix, fairness->minority.PositiveRate());
  return predictions;
}

bool Constant(const std::vector<int>& values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) ==
         values.end();
}

class Notifier {
 public:
  explicit Notifier(RoundObserver* observer) : observer_(observer) {}
  void operator()(RoundStage stage) const {
    if (observer_ != nullptr) observer_->OnStage(stage);
  }

 private:
  RoundObserver* observer_;
};

absl::StatusOr<JointModel> FitOnce(const Dataset& train, const std::string& synthesizer,
                                   double epsilon, const ExperimentConfig& config,
                                   uint64_t seed, RoundResult& result) {
  absl::StatusOr<PrivacyBudget> budget = PrivacyBudget::Create(epsilon, config.delta);
  if (!budget.ok()) return budget.status();
  PrivacyAccountant accountant(*budget);
  Rng rng(seed);
  absl::StatusOr<JointModel> model =
      FitSynthesizer(synthesizer, train, accountant, config.options, rng);
  result.epsilon_spent.push_back(accountant.SpentEpsilon());
  return model;
}

}  // namespace

bool ExperimentConfig::evaluates_real() const {
  return std::find(modes.begin(), modes.end(), "real-test") != modes.end();
}

bool ExperimentConfig::evaluates_synthetic() const {
  return std::find(modes.begin(), modes.end(), "synthetic-test") != modes.end();
}

namespace {

// Grid checks shared by file-loaded and programmatic configs.
std::vector<std::string> ConfigProblems(const ExperimentConfig& config) {
  std::vector<std::string> errors;
  if (config.synthesizers.empty()) {
    errors.push_back("synthesizer list is empty");
  }
  std::set<std::string> seen;
  for (const std::string& name : config.synthesizers) {
    if (!IsRegisteredSynthesizer(name)) {
      errors.push_back(absl::StrCat("unknown synthesizer '", name, "'"));
    }
    if (!seen.insert(name).second) {
      errors.push_back(absl::StrCat("synthesizer '", name, "' listed twice"));
    }
  }
  if (config.epsilons.empty()) {
    errors.push_back("epsilon list is empty");
  }
  for (double eps : config.epsilons) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      errors.push_back(absl::StrCat("epsilon must be positive, got ", eps));
    }
  }
  if (config.rounds < 1) {
    errors.push_back(absl::StrCat("rounds must be at least 1, got ", config.rounds));
  }
  if (!(config.split_fraction > 0.0 && config.split_fraction < 1.0)) {
    errors.push_back("split_fraction must be in (0, 1)");
  }
  if (!(config.delta >= 0.0 && config.delta < 1.0)) {
    errors.push_back("delta must be in [0, 1)");
  }
  if (config.jobs < 1) errors.push_back("jobs must be at least 1");
  if (config.modes.empty()) errors.push_back("no evaluation modes");
  for (const std::string& mode : config.modes) {
    if (mode != "real-test" && mode != "synthetic-test") {
      errors.push_back(absl::StrCat("unknown evaluation mode '", mode, "'"));
    }
  }
  return errors;
}

}  // namespace

absl::Status ValidateConfig(const ExperimentConfig& config) {
  const std::vector<std::string> errors = ConfigProblems(config);
  if (errors.empty()) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrJoin(errors, "; "));
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(const json& j,
                                                const std::string& base_dir) {
  if (!j.is_object()) return absl::InvalidArgumentError("config must be a JSON object");
  ExperimentConfig config;
  std::vector<std::string> errors;
  static const std::set<std::string> kKeys = {
      "description", "recipe",     "data",   "synthesizers",        "epsilons",
      "rounds",      "seed",       "split_fraction", "modes",       "delta",
      "single_fit",  "jobs",       "synthesizer_options", "classifier"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) errors.push_back(absl::StrCat("unknown key '", key, "'"));
  }
  auto read = [&](const char* key, auto& target, bool required) {
    if (!j.contains(key)) {
      if (required) errors.push_back(absl::StrCat("missing key '", key, "'"));
      return;
    }
    try {
      j.at(key).get_to(target);
    } catch (const json::exception& e) {
      errors.push_back(absl::StrCat("bad value for '", key, "': ", e.what()));
    }
  };
  read("recipe", config.recipe, true);
  read("data", config.data, true);
  read("synthesizers", config.synthesizers, true);
  read("epsilons", config.epsilons, true);
  read("rounds", config.rounds, false);
  read("seed", config.seed, false);
  read("split_fraction", config.split_fraction, false);
  read("modes", config.modes, false);
  read("delta", config.delta, false);
  read("single_fit", config.single_fit, false);
  read("jobs", config.jobs, false);

  if (LooksLikePath(config.recipe)) config.recipe = Resolve(config.recipe, base_dir);
  config.data = Resolve(config.data, base_dir);
  if (j.contains("recipe") && config.recipe.empty()) errors.push_back("recipe is empty");
  for (std::string& problem : ConfigProblems(config)) errors.push_back(std::move(problem));
  if (j.contains("synthesizer_options")) {
    absl::StatusOr<SynthesizerOptions> options =
        OptionsFromJson(j.at("synthesizer_options"));
    if (options.ok()) {
      config.options = *options;
    } else {
      errors.push_back(std::string(options.status().message()));
    }
  }
  if (j.contains("classifier")) {
    const json& c = j.at("classifier");
    try {
      for (const auto& [key, value] : c.items()) {
        if (key == "learning_rate") {
          config.classifier.learning_rate = value.get<double>();
        } else if (key == "epochs") {
          config.classifier.epochs = value.get<int>();
        } else if (key == "l2") {
          config.classifier.l2 = value.get<double>();
        } else if (key == "threshold") {
          config.classifier.threshold = value.get<double>();
        } else {
          errors.push_back(absl::StrCat("unknown classifier key '", key, "'"));
        }
      }
    } catch (const json::exception& e) {
      errors.push_back(absl::StrCat("bad classifier settings: ", e.what()));
    }
    if (!(config.classifier.learning_rate > 0.0) || config.classifier.epochs < 0 ||
        !(config.classifier.l2 >= 0.0)) {
      errors.push_back("classifier settings out of range");
    }
  }
  if (!errors.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("invalid config: ", absl::StrJoin(errors, "; ")));
  }
  return config;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  json j = json::parse(*text, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("config ", path, " is not valid JSON"));
  }
  return ConfigFromJson(j, fs::path(path).parent_path().string());
}

json ConfigToJson(const ExperimentConfig& config) {
  return {{"recipe", config.recipe},
          {"data", config.data},
          {"synthesizers", config.synthesizers},
          {"epsilons", config.epsilons},
          {"rounds", config.rounds},
          {"seed", config.seed},
          {"split_fraction", config.split_fraction},
          {"modes", config.modes},
          {"delta", config.delta},
          {"single_fit", config.single_fit},
          {"synthesizer_options",
           {{"noise", NoiseKindName(config.options.mwem.noise)},
            {"mwem_iterations", config.options.mwem.iterations},
            {"mwem_domain_cap", config.options.mwem.domain_cap},
            {"mwem_repetitions", config.options.mwem.mw_repetitions},
            {"privbayes_k", config.options.privbayes.k}}},
          {"classifier",
           {{"learning_rate", config.classifier.learning_rate},
            {"epochs", config.classifier.epochs},
            {"l2", config.classifier.l2},
            {"threshold", config.classifier.threshold}}}};
}

absl::StatusOr<std::string> ResolveRecipePath(const std::string& id) {
  if (fs::is_regular_file(id)) return id;
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("DPFAIR_RECIPES_DIR"); env != nullptr && *env) {
    dirs.push_back(env);
  }
  dirs.push_back(std::string(DPFAIR_SOURCE_DIR) + "/recipes");
  for (const std::string& dir : dirs) {
    const fs::path candidate = fs::path(dir) / (id + ".json");
    if (fs::is_regular_file(candidate)) return candidate.string();
  }
  return absl::NotFoundError(absl::StrCat("no recipe named '", id, "'"));
}

absl::StatusOr<PreparedData> PrepareDataset(const std::string& recipe_id,
                                            const std::string& csv_path,
                                            const LogisticHyper& ranker_hyper) {
  absl::StatusOr<std::string> recipe_path = ResolveRecipePath(recipe_id);
  if (!recipe_path.ok()) return recipe_path.status();
  absl::StatusOr<Recipe> recipe = LoadRecipe(*recipe_path);
  if (!recipe.ok()) return recipe.status();
  absl::StatusOr<LoadedData> loaded = LoadCsv(csv_path, *recipe);
  if (!loaded.ok()) return loaded.status();
  PreparedData out{*recipe, loaded->data, loaded->report, std::nullopt};
  if (recipe->massage) {
    absl::StatusOr<LogisticModel> ranker = TrainOnDataset(out.data, ranker_hyper);
    if (!ranker.ok()) return ranker.status();
    absl::StatusOr<MassageResult> massaged = MassageLabels(out.data, *ranker);
    if (!massaged.ok()) return massaged.status();
    out.data = massaged->data;
    out.massage = *std::move(massaged);
  }
  return out;
}

const char* RoundStageName(RoundStage stage) {
  switch (stage) {
    case RoundStage::kFit:
      return "fit";
    case RoundStage::kSample:
      return "sample";
    case RoundStage::kTrain:
      return "train";
    case RoundStage::kEvaluateSynthetic:
      return "evaluate-synthetic";
    case RoundStage::kEvaluateReal:
      return "evaluate-real";
  }
  return "unknown";
}

std::optional<double> RoundResult::metric(const std::string& name) const {
  auto it = metrics.find(name);
  return it == metrics.end() ? std::nullopt : it->second;
}

uint64_t CellSeed(uint64_t root, const std::string& synthesizer, double epsilon,
                  int round) {
  return DeriveSeed(root, absl::StrFormat("%s/%.17g", synthesizer, epsilon),
                    static_cast<uint64_t>(round));
}

RoundResult RunRound(const Dataset& real_train, const HeldOutData& real_test,
                     const std::string& synthesizer, double epsilon, int round,
                     uint64_t seed, const ExperimentConfig& config,
                     RoundObserver* observer) {
  const Notifier notify(observer);
  RoundResult result;
  result.synthesizer = synthesizer;
  result.epsilon = epsilon;
  result.round = round;
  result.seed = seed;
  auto fail = [&](const absl::Status& status) {
    result.failed = true;
    result.error = std::string(status.message());
    return result;
  };

  notify(RoundStage::kFit);
  absl::StatusOr<JointModel> model = FitOnce(real_train, synthesizer, epsilon, config,
                                             DeriveSeed(seed, "fit"), result);
  if (!model.ok()) return fail(model.status());
  JointModel test_model = *model;
  if (!config.single_fit) {
    absl::StatusOr<JointModel> second = FitOnce(real_train, synthesizer, epsilon, config,
                                                DeriveSeed(seed, "fit-test"), result);
    if (!second.ok()) return fail(second.status());
    test_model = *std::move(second);
  }

  notify(RoundStage::kSample);
  Rng train_rng(DeriveSeed(seed, "sample-train"));
  Rng test_rng(DeriveSeed(seed, "sample-test"));
  const Dataset synthetic_train = Sample(*model, real_train.size(), train_rng);
  const Dataset synthetic_test = Sample(test_model, real_test.size(), test_rng);
  if (absl::StatusOr<GroupValues> ratios = PositiveLabelRatio(synthetic_train);
      ratios.ok()) {
    Put(result.metrics, "label_ratio_priv_syn", ratios->privileged);
    Put(result.metrics, "label_ratio_min_syn", ratios->minority);
  } else {
    Put(result.metrics, "label_ratio_priv_syn", std::nullopt);
    Put(result.metrics, "label_ratio_min_syn", std::nullopt);
  }

  notify(RoundStage::kTrain);
  absl::StatusOr<LogisticModel> classifier =
      TrainOnDataset(synthetic_train, config.classifier);
  if (!classifier.ok()) return fail(classifier.status());
  result.constant_score = classifier->constant_score_warning;

  if (config.evaluates_synthetic()) {
    notify(RoundStage::kEvaluateSynthetic);
    EvaluateInto(*classifier, synthetic_test, "_s", result.metrics);
  }
  if (config.evaluates_real()) {
    notify(RoundStage::kEvaluateReal);
    const std::vector<int> predictions =
        EvaluateInto(*classifier, real_test.Read(), "_r", result.metrics);
    result.degenerate = Constant(predictions);
  }
  Put(result.metrics, "auc_gap",
      Difference(result.metric("auc_r"), result.metric("auc_s")));
  Put(result.metrics, "dsp_delta",
      Difference(result.metric("dsp_r"), result.metric("dsp_s")));
  Put(result.metrics, "deo_delta",
      Difference(result.metric("deo_r"), result.metric("deo_s")));
  return result;
}

RoundResult RunBaseline(const Dataset& real_train, const Dataset& real_test,
                        const ExperimentConfig& config) {
  RoundResult result;
  result.synthesizer = "real";
  absl::StatusOr<LogisticModel> classifier = TrainOnDataset(real_train, config.classifier);
  if (!classifier.ok()) {
    result.failed = true;
    result.error = std::string(classifier.status().message());
    return result;
  }
  result.constant_score = classifier->constant_score_warning;
  const std::vector<int> predictions =
      EvaluateInto(*classifier, real_test, "_r", result.metrics);
  result.degenerate = Constant(predictions);
  if (absl::StatusOr<GroupValues> ratios = PositiveLabelRatio(real_train); ratios.ok()) {
    Put(result.metrics, "label_ratio_priv_train", ratios->privileged);
    Put(result.metrics, "label_ratio_min_train", ratios->minority);
  }
  return result;
}

MetricSummary Summarize(const std::vector<std::optional<double>>& values) {
  MetricSummary summary;
  std::vector<double> present;
  for (const std::optional<double>& v : values) {
    if (v) {
      present.push_back(*v);
    } else {
      ++summary.flagged;
    }
  }
  summary.count = present.size();
  if (present.empty()) return summary;
  double sum = 0.0;
  for (double v : present) sum += v;
  const double mean = sum / static_cast<double>(present.size());
  double squares = 0.0;
  for (double v : present) squares += (v - mean) * (v - mean);
  const double std =
      present.size() > 1 ? std::sqrt(squares / static_cast<double>(present.size() - 1)) : 0.0;
  summary.mean = mean;
  summary.std = std;
  summary.stderr_ = std / std::sqrt(static_cast<double>(present.size()));
  return summary;
}

std::vector<CellSummary> Aggregate(const std::vector<RoundResult>& rounds,
                                   const ExperimentConfig& config) {
  std::vector<CellSummary> cells;
  for (const std::string& synthesizer : config.synthesizers) {
    for (double epsilon : config.epsilons) {
      CellSummary cell;
      cell.synthesizer = synthesizer;
      cell.epsilon = epsilon;
      std::map<std::string, std::vector<std::optional<double>>> series;
      for (const RoundResult& r : rounds) {
        if (r.synthesizer != synthesizer || r.epsilon != epsilon) continue;
        ++cell.rounds;
        for (double spent : r.epsilon_spent) {
          cell.budget_error = std::max(cell.budget_error, std::abs(spent - epsilon));
        }
        if (r.failed) {
          ++cell.failed;
          continue;
        }
        if (r.degenerate) ++cell.degenerate_rounds;
        for (const auto& [name, value] : r.metrics) series[name].push_back(value);
      }
      for (const auto& [name, values] : series) cell.metrics[name] = Summarize(values);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

const CellSummary* BenchmarkReport::cell(const std::string& synthesizer,
                                         double epsilon) const {
  for (const CellSummary& c : cells) {
    if (c.synthesizer == synthesizer && c.epsilon == epsilon) return &c;
  }
  return nullptr;
}

absl::StatusOr<BenchmarkReport> RunBenchmarkOn(const Dataset& data,
                                               const std::string& dataset_name,
                                               const ExperimentConfig& config) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<std::pair<Dataset, Dataset>> split =
      SplitTrainTest(data, config.split_fraction, DeriveSeed(config.seed, "split"));
  if (!split.ok()) return split.status();
  const Dataset& train = split->first;
  const Dataset& test = split->second;

  BenchmarkReport report;
  report.dataset = dataset_name;
  report.config = config;
  report.train_size = train.size();
  report.test_size = test.size();
  report.baseline = RunBaseline(train, test, config);

  struct Job {
    std::string synthesizer;
    double epsilon;
    int round;
  };
  std::vector<Job> jobs;
  for (const std::string& synthesizer : config.synthesizers) {
    for (double epsilon : config.epsilons) {
      for (int round = 0; round < config.rounds; ++round) {
        jobs.push_back({synthesizer, epsilon, round});
      }
    }
  }
  report.rounds.resize(jobs.size());
  const InMemoryHeldOut held_out(test);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      report.rounds[i] =
          RunRound(train, held_out, job.synthesizer, job.epsilon, job.round,
                   CellSeed(config.seed, job.synthesizer, job.epsilon, job.round),
                   config);
    }
  };
  const size_t threads =
      std::min(jobs.size(), static_cast<size_t>(std::max(config.jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const RoundResult& r : report.rounds) report.failed_rounds += r.failed ? 1 : 0;
  report.cells = Aggregate(report.rounds, config);
  return report;
}

absl::StatusOr<BenchmarkReport> RunBenchmark(const ExperimentConfig& config) {
  absl::StatusOr<PreparedData> prepared =
      PrepareDataset(config.recipe, config.data, config.classifier);
  if (!prepared.ok()) return prepared.status();
  return RunBenchmarkOn(prepared->data, prepared->recipe.id, config);
}

absl::StatusOr<std::vector<std::string>> RankSynthesizers(const BenchmarkReport& report,
                                                          const std::string& task,
                                                          double epsilon) {
  const std::vector<std::string> tasks(std::begin(kRankTasks), std::end(kRankTasks));
  if (std::find(tasks.begin(), tasks.end(), task) == tasks.end()) {
    return absl::InvalidArgumentError(absl::StrCat("unknown ranking task '", task, "'"));
  }
  auto mean = [](const CellSummary& cell, const std::string& name) {
    auto it = cell.metrics.find(name);
    return it == cell.metrics.end() ? std::nullopt : it->second.mean;
  };
  auto base = [&](const std::string& name) { return report.baseline.metric(name); };
  auto gap = [](std::optional<double> a, std::optional<double> b) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return std::abs(*a - *b);
  };

  struct Entry {
    std::string name;
    int tier;  // 0 scored, 1 unscored, 2 degenerate
    double key;
  };
  std::vector<Entry> entries;
  for (const CellSummary& cell : report.cells) {
    if (cell.epsilon != epsilon) continue;
    std::optional<double> key;
    if (task == "train-utility") {
      if (std::optional<double> auc = mean(cell, "auc_r")) key = -*auc;
    } else if (task == "eval-utility") {
      key = gap(mean(cell, "auc_r"), mean(cell, "auc_s"));
    } else if (task == "subgroup-accuracy") {
      std::optional<double> priv = gap(mean(cell, "accuracy_priv_r"), base("accuracy_priv_r"));
      std::optional<double> min = gap(mean(cell, "accuracy_min_r"), base("accuracy_min_r"));
      if (priv && min) key = *priv + *min;
    } else if (task == "dsp-fidelity") {
      key = gap(mean(cell, "dsp_r"), base("dsp_r"));
    } else {
      key = gap(mean(cell, "deo_r"), base("deo_r"));
    }
    const bool degenerate = 2 * cell.degenerate_rounds > cell.rounds;
    entries.push_back({cell.synthesizer, degenerate ? 2 : (key ? 0 : 1), key.value_or(0.0)});
  }
  if (entries.size() < 2) {
    return absl::FailedPreconditionError(
        absl::StrCat("ranking needs at least two synthesizers at epsilon ", epsilon));
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.tier != b.tier) return a.tier < b.tier;
    if (a.tier == 0 && a.key != b.key) return a.key < b.key;
    return false;
  });
  std::vector<std::string> out;
  for (const Entry& e : entries) out.push_back(e.name);
  return out;
}

}  // namespace dpfair
