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


// Reference synthesizers that learn almost nothing.

#ifndef DPFAIR_BASELINES_H_
#define DPFAIR_BASELINES_H_

#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"

namespace dpfair {

// Product of noisy 1-way marginals, each measured with an equal share of
// the budget.
absl::StatusOr<JointModel> IndependentFit(const Dataset& data,
                                          PrivacyAccountant& accountant,
                                          NoiseKind noise, Rng& rng);

// Constant label, every other attribute uniform. The majority label is the
// argmax of a noisy label histogram that spends the whole budget.
absl::StatusOr<JointModel> DegenerateFit(const Dataset& data,
                                         PrivacyAccountant& accountant,
                                         NoiseKind noise, Rng& rng);

}  // namespace dpfair

#endif  // DPFAIR_BASELINES_H_
