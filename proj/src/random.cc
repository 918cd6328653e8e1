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

#include "mfpbt/random.h"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mfpbt {

const char* StreamKindName(StreamKind kind) {
  switch (kind) {
    case StreamKind::kInit:
      return "init";
    case StreamKind::kTrain:
      return "train";
    case StreamKind::kEval:
      return "eval";
    case StreamKind::kEvolve:
      return "evolve";
  }
  return "unknown";
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

Rng::Rng(std::seed_seq& seq) : engine_(seq) {}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double low, double high) {
  return low + (high - low) * Uniform();
}

double Rng::Normal() {
  // 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::string Rng::State() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void Rng::SetState(const std::string& state) {
  std::istringstream in(state);
  in >> engine_;
}

Rng SeedHierarchy(std::uint64_t master_seed, int agent_id, StreamKind kind,
                  int round) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(agent_id),
                    static_cast<std::uint32_t>(kind),
                    static_cast<std::uint32_t>(round)};
  return Rng(seq);
}

}  // namespace mfpbt
