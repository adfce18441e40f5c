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


// Name-based dispatch over the available synthesizers.

#ifndef DPFAIR_SYNTHESIZER_H_
#define DPFAIR_SYNTHESIZER_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/mst.h"
#include "dpfair/mwem.h"
#include "dpfair/privbayes.h"
#include "dpfair/random.h"
#include "json.hpp"

namespace dpfair {

struct SynthesizerOptions {
  MwemConfig mwem;
  MstConfig mst;
  PrivBayesConfig privbayes;
  // Noise for the baselines; the others use their own config.
  NoiseKind baseline_noise = NoiseKind::kLaplace;

  // Sets every synthesizer's measurement noise.
  void SetNoise(NoiseKind kind);
};

// Reads optional keys "noise", "mwem_iterations", "mwem_domain_cap",
// "mwem_repetitions", "privbayes_k". Unknown keys are errors.
absl::StatusOr<SynthesizerOptions> OptionsFromJson(const nlohmann::json& json);

// "mwem", "mst", "privbayes", "independent", "degenerate".
const std::vector<std::string>& SynthesizerNames();
bool IsRegisteredSynthesizer(std::string_view name);

// Fits `name` on `data`, spending from `accountant`.
absl::StatusOr<JointModel> FitSynthesizer(std::string_view name, const Dataset& data,
                                          PrivacyAccountant& accountant,
                                          const SynthesizerOptions& options,
                                          Rng& rng);

}  // namespace dpfair

#endif  // DPFAIR_SYNTHESIZER_H_
