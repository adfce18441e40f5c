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

#ifndef DPFAIR_RANDOM_H_
#define DPFAIR_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace dpfair {

// Seeded 64-bit generator. All randomness in the library flows through an
// explicit Rng so that identical seeds reproduce identical streams.
class Rng {
 public:
  using result_type = std::mt19937_64::result_type;

  explicit Rng(uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();
  // Uniform on (0, 1); never returns an endpoint.
  double UniformOpen();
  // Uniform integer in [0, n). n must be positive.
  size_t Index(size_t n);
  // Standard normal draw (Box-Muller, one value per call).
  double Normal();
  // Fresh seed for a child generator.
  uint64_t NextSeed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit FNV-1a hash. Unlike std::hash it does not vary between
// standard library implementations.
uint64_t StableHash(std::string_view text);

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// Child seed for a named component and index under a root seed:
//   Mix64(root ^ Mix64(StableHash(component) ^ Mix64(index)))
// Every (component, index) pair gets an independent stream, so results do
// not depend on the order in which components are scheduled.
uint64_t DeriveSeed(uint64_t root, std::string_view component,
                    uint64_t index = 0);

}  // namespace dpfair

#endif  // DPFAIR_RANDOM_H_
