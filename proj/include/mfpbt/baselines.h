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

#ifndef MFPBT_BASELINES_H_
#define MFPBT_BASELINES_H_

#include <span>
#include <vector>

#include "mfpbt/core.h"
#include "mfpbt/events.h"
#include "mfpbt/pbt.h"

namespace mfpbt {

// Random search: hyperparameters are sampled once and never touched.
inline std::vector<EvolutionEvent> RsRound(const Population& /*population*/) {
  return {};
}

// A deep copy of an agent as it was evaluated at `round`.
struct Elite {
  Payload payload;
  HyperparamVector hyperparams;
  double fitness = 0.0;
  AgentId origin = 0;
  int round = 0;

  bool operator==(const Elite&) const = default;
};

// The best `capacity` (fitness, agent, round) snapshots seen so far, ordered by
// fitness descending, then origin id, then round.
class EliteArchive {
 public:
  explicit EliteArchive(int capacity = 0);

  int capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }
  const std::vector<Elite>& entries() const { return entries_; }

  // Lookup by provenance; nullptr if not archived.
  const Elite* Find(AgentId origin, int round) const;

  // Merges the population's current snapshots into the archive.
  void Update(const Population& population, int round);

  // Replaces the contents verbatim (used when resuming from a checkpoint).
  void Restore(std::vector<Elite> entries);

 private:
  int capacity_;
  std::vector<Elite> entries_;
};

// Strict ordering used by the archive.
bool EliteBefore(double fitness_a, AgentId origin_a, int round_a, double fitness_b,
                 AgentId origin_b, int round_b);

inline void UpdateElites(EliteArchive& archive, const Population& population,
                         int round) {
  archive.Update(population, round);
}

struct BacktrackConfig {
  int elites = 16;  // archive capacity N_e
  int period = 50;  // rounds between reincorporations

  bool operator==(const BacktrackConfig&) const = default;
};

// Replaces the bottom min(capacity, N/2) agents by `fitness` (one value per
// agent id) with elite clones, best elite first, cycling if the archive holds
// fewer entries. An empty archive is a no-op.
std::vector<EvolutionEvent> Backtrack(Population& population,
                                      const EliteArchive& archive,
                                      std::span<const double> fitness, int round);

// Same, ranking agents by their snapshot fitness.
std::vector<EvolutionEvent> Backtrack(Population& population,
                                      const EliteArchive& archive, int round);

// PBT with backtracking: archive update, PBT step every `delta` rounds, then
// elite reincorporation every `config.period` rounds. Agents that received a
// payload this round are ranked for backtracking by the donor's fitness.
std::vector<EvolutionEvent> PbtBtRound(Population& population, EliteArchive& archive,
                                       const BacktrackConfig& config, int delta,
                                       const EvolutionContext& ctx);

}  // namespace mfpbt

#endif  // MFPBT_BASELINES_H_
