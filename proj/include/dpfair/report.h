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


// Report files for a benchmark run.
//
//   rounds.csv         dataset,synthesizer,epsilon,round,metric,value
//                      (one row per round and metric; "NA" marks an
//                      undefined value; the baseline appears as "real")
//   report.json        config, baseline metrics, per-cell summaries
//                      (mean, std, stderr, count, flagged) and rankings
//   series/<metric>.csv  synthesizer,epsilon,mean,std,stderr,count,flagged

#ifndef DPFAIR_REPORT_H_
#define DPFAIR_REPORT_H_

#include <string>

#include "absl/status/status.h"
#include "dpfair/pipeline.h"
#include "json.hpp"

namespace dpfair {

std::string RoundsCsv(const BenchmarkReport& report);
nlohmann::json ReportJson(const BenchmarkReport& report);
std::string SeriesCsv(const BenchmarkReport& report, const std::string& metric);

// Writes every report file under `dir`, creating it if needed.
absl::Status WriteReport(const BenchmarkReport& report, const std::string& dir);

// "%.17g", or "NA" for nullopt.
std::string FormatValue(std::optional<double> value);

}  // namespace dpfair

#endif  // DPFAIR_REPORT_H_
