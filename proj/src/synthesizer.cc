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


#include "dpfair/synthesizer.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "dpfair/baselines.h"

namespace dpfair {

void SynthesizerOptions::SetNoise(NoiseKind kind) {
  mwem.noise = kind;
  mst.noise = kind;
  privbayes.noise = kind;
  baseline_noise = kind;
}

absl::StatusOr<SynthesizerOptions> OptionsFromJson(const nlohmann::json& json) {
  SynthesizerOptions options;
  if (json.is_null()) return options;
  if (!json.is_object()) {
    return absl::InvalidArgumentError("synthesizer options must be an object");
  }
  try {
    for (const auto& [key, value] : json.items()) {
      if (key == "noise") {
        absl::StatusOr<NoiseKind> kind = ParseNoiseKind(value.get<std::string>());
        if (!kind.ok()) return kind.status();
        options.SetNoise(*kind);
      } else if (key == "mwem_iterations") {
        options.mwem.iterations = value.get<int>();
      } else if (key == "mwem_domain_cap") {
        options.mwem.domain_cap = value.get<size_t>();
      } else if (key == "mwem_repetitions") {
        options.mwem.mw_repetitions = value.get<int>();
      } else if (key == "privbayes_k") {
        options.privbayes.k = value.get<int>();
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown synthesizer option '", key, "'"));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad synthesizer option: ", e.what()));
  }
  if (absl::Status s = options.mwem.Validate(); !s.ok()) return s;
  if (options.privbayes.k < 1) {
    return absl::InvalidArgumentError("privbayes_k must be at least 1");
  }
  return options;
}

const std::vector<std::string>& SynthesizerNames() {
  static const auto* names = new std::vector<std::string>{
      "mwem", "mst", "privbayes", "independent", "degenerate"};
  return *names;
}

bool IsRegisteredSynthesizer(std::string_view name) {
  const std::vector<std::string>& names = SynthesizerNames();
  return std::find(names.begin(), names.end(), name) != names.end();
}

absl::StatusOr<JointModel> FitSynthesizer(std::string_view name, const Dataset& data,
                                          PrivacyAccountant& accountant,
                                          const SynthesizerOptions& options,
                                          Rng& rng) {
  if (name == "mwem") {
    return MwemFit(data, Workload::Default(data.schema()), accountant, options.mwem,
                   rng);
  }
  if (name == "mst") return MstFit(data, accountant, options.mst, rng);
  if (name == "privbayes") return PrivBayesFit(data, accountant, options.privbayes, rng);
  if (name == "independent") {
    return IndependentFit(data, accountant, options.baseline_noise, rng);
  }
  if (name == "degenerate") {
    return DegenerateFit(data, accountant, options.baseline_noise, rng);
  }
  return absl::NotFoundError(absl::StrCat("unknown synthesizer '", std::string(name), "'"));
}

}  // namespace dpfair
