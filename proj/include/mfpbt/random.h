// Copyright 2026 The mfpbt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MFPBT_RANDOM_H_
#define MFPBT_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>

namespace mfpbt {

// Purpose of a random stream. Every agent owns one stream per kind and round,
// so training, evaluation and evolution never draw from each other's streams.
enum class StreamKind : std::uint32_t {
  kInit = 0,
  kTrain = 1,
  kEval = 2,
  kEvolve = 3,
};

const char* StreamKindName(StreamKind kind);

// Thin wrapper around a 64-bit Mersenne Twister. The floating-point draws are
// computed here rather than through <random> distributions, whose algorithms
// are implementation-defined, so that streams are identical across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  explicit Rng(std::seed_seq& seq);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform on [low, high).
  double Uniform(double low, double high);

  // Standard normal via Box-Muller. Consumes exactly two words per call and
  // caches nothing, so the stream position depends only on the call count.
  double Normal();

  // Fair coin.
  bool Coin() { return (engine_() >> 63) != 0; }

  // Serialized engine state (textual, as produced by operator<<).
  std::string State() const;
  void SetState(const std::string& state);

  bool operator==(const Rng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

// Derives a reproducible stream for (master_seed, agent, kind, round). Distinct
// inputs give independent streams; identical inputs give identical streams.
// Rounds start at 1; round 0 is used for initialisation streams.
Rng SeedHierarchy(std::uint64_t master_seed, int agent_id, StreamKind kind,
                  int round = 0);

// Convenience holder for the master seed of a run.
class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t master_seed) : master_(master_seed) {}

  Rng Stream(int agent_id, StreamKind kind, int round = 0) const {
    return SeedHierarchy(master_, agent_id, kind, round);
  }

  std::uint64_t master_seed() const { return master_; }

 private:
  std::uint64_t master_;
};

}  // namespace mfpbt

#endif  // MFPBT_RANDOM_H_
