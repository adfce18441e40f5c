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


// dpfair command-line tool.
//
//   dpfair prepare   --recipe ID --in RAW.csv [--out FILE]
//   dpfair synth     --in PREPARED --gen NAME --eps E [--delta D] [--seed S]
//                    [--n ROWS] [--out FILE.csv]
//   dpfair benchmark --config FILE [--out DIR] [--jobs N] [--dry-run]
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
// Outputs default to $DPFAIR_OUT_DIR (or the working directory).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/pipeline.h"
#include "dpfair/random.h"
#include "dpfair/report.h"
#include "dpfair/synthesizer.h"

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;

std::string OutputDir() {
  const char* env = std::getenv("DPFAIR_OUT_DIR");
  return env != nullptr && *env ? env : ".";
}

std::string DefaultOut(const std::string& flag, const std::string& name) {
  return flag.empty() ? (fs::path(OutputDir()) / name).string() : flag;
}

int Fail(const absl::Status& status, int code) {
  std::cerr << "dpfair: " << status.message() << "\n";
  return code;
}

int CodeFor(const absl::Status& status) {
  return absl::IsInvalidArgument(status) ? kUsage : kRuntime;
}

int Prepare(const std::string& recipe_id, const std::string& in, const std::string& out) {
  absl::StatusOr<dpfair::PreparedData> prepared = dpfair::PrepareDataset(recipe_id, in);
  if (!prepared.ok()) return Fail(prepared.status(), kRuntime);
  const dpfair::LoadReport& report = prepared->report;
  std::cout << absl::StrFormat("recipe %s: read %d rows, dropped %d, kept %d\n",
                               prepared->recipe.id, report.rows_read, report.rows_dropped,
                               prepared->data.size());
  for (const auto& [column, count] : report.drops_by_column) {
    std::cout << absl::StrFormat("  dropped %d rows at column %s\n", count, column);
  }
  nlohmann::json provenance = {{"source", fs::path(in).filename().string()},
                               {"rows_read", report.rows_read},
                               {"rows_dropped", report.rows_dropped}};
  if (prepared->massage) {
    const dpfair::MassageResult& m = *prepared->massage;
    std::cout << absl::StrFormat(
        "massaged labels: M = %d, promoted %d, demoted %d, shortfall %d (%s)\n", m.m,
        m.promoted, m.demoted, m.shortfall,
        m.promote_minority ? "minority promoted" : "privileged promoted");
    provenance["massage"] = {{"m", m.m},
                             {"promoted", m.promoted},
                             {"demoted", m.demoted},
                             {"shortfall", m.shortfall}};
  }
  const std::string path = DefaultOut(out, prepared->recipe.id + ".prepared.json");
  const nlohmann::json json =
      dpfair::PreparedToJson(prepared->data, prepared->recipe.id, provenance);
  if (absl::Status s = dpfair::WriteFile(path, json.dump() + "\n"); !s.ok()) {
    return Fail(s, kRuntime);
  }
  std::cout << "wrote " << path << "\n";
  return kOk;
}

int Synth(const std::string& in, const std::string& gen, double eps, double delta,
          uint64_t seed, int64_t n, const std::string& out) {
  if (!dpfair::IsRegisteredSynthesizer(gen)) {
    return Fail(absl::InvalidArgumentError("unknown synthesizer '" + gen + "'"), kUsage);
  }
  absl::StatusOr<dpfair::PrivacyBudget> budget = dpfair::PrivacyBudget::Create(eps, delta);
  if (!budget.ok()) return Fail(budget.status(), kUsage);
  if (n == 0 || n < -1) {
    return Fail(absl::InvalidArgumentError("--n must be positive"), kUsage);
  }
  absl::StatusOr<dpfair::Dataset> data = dpfair::LoadPrepared(in);
  if (!data.ok()) return Fail(data.status(), kRuntime);
  dpfair::PrivacyAccountant accountant(*budget);
  dpfair::Rng fit_rng(dpfair::DeriveSeed(seed, "fit"));
  absl::StatusOr<dpfair::JointModel> model =
      dpfair::FitSynthesizer(gen, *data, accountant, {}, fit_rng);
  if (!model.ok()) return Fail(model.status(), CodeFor(model.status()));
  dpfair::Rng sample_rng(dpfair::DeriveSeed(seed, "sample"));
  const size_t rows = n < 0 ? data->size() : static_cast<size_t>(n);
  const dpfair::Dataset synthetic = dpfair::Sample(*model, rows, sample_rng);
  const std::string path = DefaultOut(out, absl::StrFormat("%s-%s.csv", gen, "synthetic"));
  if (absl::Status s = dpfair::WriteDatasetCsv(synthetic, path); !s.ok()) {
    return Fail(s, kRuntime);
  }
  std::cout << absl::StrFormat("%s: epsilon spent %.6g of %.6g, wrote %d rows to %s\n",
                               gen, accountant.SpentEpsilon(), eps, rows, path);
  return kOk;
}

int Benchmark(const std::string& config_path, const std::string& out, int jobs,
              bool dry_run) {
  absl::StatusOr<dpfair::ExperimentConfig> config = dpfair::LoadConfig(config_path);
  if (!config.ok()) return Fail(config.status(), CodeFor(config.status()));
  if (jobs > 0) config->jobs = jobs;
  std::cout << absl::StrFormat(
      "grid: %d synthesizers x %d epsilons x %d rounds = %d cells + 1 baseline\n",
      config->synthesizers.size(), config->epsilons.size(), config->rounds,
      config->num_cells());
  if (dry_run) {
    for (const std::string& s : config->synthesizers) {
      for (double e : config->epsilons) {
        std::cout << absl::StrFormat("  %s eps=%g rounds=%d\n", s, e, config->rounds);
      }
    }
    return kOk;
  }
  absl::StatusOr<dpfair::BenchmarkReport> report = dpfair::RunBenchmark(*config);
  if (!report.ok()) return Fail(report.status(), kRuntime);
  const std::string dir = DefaultOut(out, report->dataset + "-report");
  if (absl::Status s = dpfair::WriteReport(*report, dir); !s.ok()) {
    return Fail(s, kRuntime);
  }
  auto show = [](std::optional<double> v) { return dpfair::FormatValue(v).substr(0, 7); };
  std::cout << absl::StrFormat("baseline (real): auc %s dsp %s deo %s\n",
                               show(report->baseline.metric("auc_r")),
                               show(report->baseline.metric("dsp_r")),
                               show(report->baseline.metric("deo_r")));
  for (const dpfair::CellSummary& cell : report->cells) {
    auto mean = [&](const std::string& name) {
      auto it = cell.metrics.find(name);
      return show(it == cell.metrics.end() ? std::nullopt : it->second.mean);
    };
    std::cout << absl::StrFormat(
        "%-12s eps=%-5g auc_r %s auc_s %s dsp_r %s deo_r %s failed %d degenerate %d\n",
        cell.synthesizer, cell.epsilon, mean("auc_r"), mean("auc_s"), mean("dsp_r"),
        mean("deo_r"), cell.failed, cell.degenerate_rounds);
  }
  std::cout << "wrote " << dir << "\n";
  return report->failed_rounds == 0 ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private synthetic data fairness benchmark"};
  app.require_subcommand(1);

  std::string recipe, in, out, gen, config;
  double eps = 0.0;
  double delta = 0.0;
  uint64_t seed = 0;
  int64_t n = -1;
  int jobs = 0;
  bool dry_run = false;

  CLI::App* prepare = app.add_subcommand("prepare", "bin a raw CSV with a recipe");
  prepare->add_option("--recipe", recipe, "recipe id or path")->required();
  prepare->add_option("--in", in, "raw CSV")->required();
  prepare->add_option("--out", out, "prepared dataset file");

  CLI::App* synth = app.add_subcommand("synth", "fit a synthesizer and sample a CSV");
  synth->add_option("--in", in, "prepared dataset file")->required();
  synth->add_option("--gen", gen, "synthesizer name")->required();
  synth->add_option("--eps", eps, "privacy budget epsilon")->required();
  synth->add_option("--delta", delta, "privacy budget delta");
  synth->add_option("--seed", seed, "root seed");
  synth->add_option("--n", n, "rows to sample (default: input size)");
  synth->add_option("--out", out, "output CSV");

  CLI::App* benchmark = app.add_subcommand("benchmark", "run an experiment grid");
  benchmark->add_option("--config", config, "experiment config file")->required();
  benchmark->add_option("--out", out, "report directory");
  benchmark->add_option("--jobs", jobs, "worker threads");
  benchmark->add_flag("--dry-run", dry_run, "print the grid without running it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (prepare->parsed()) return Prepare(recipe, in, out);
  if (synth->parsed()) return Synth(in, gen, eps, delta, seed, n, out);
  return Benchmark(config, out, jobs, dry_run);
}
