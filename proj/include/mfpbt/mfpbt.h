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

#ifndef MFPBT_MFPBT_H_
#define MFPBT_MFPBT_H_

#include <span>
#include <vector>

#include "mfpbt/core.h"
#include "mfpbt/events.h"
#include "mfpbt/pbt.h"

namespace mfpbt {

struct MfpbtConfig {
  // One evolution period per sub-population, strictly increasing from 1.
  std::vector<int> deltas{1};
  // Every migration is a full transfer regardless of the delta ordering.
  bool symmetric_migration = false;
  bool variance_exploitation = false;
};

// Throws ConfigError unless deltas[0] == 1 and deltas are strictly increasing.
void ValidateDeltas(std::span<const int> deltas);

// True iff sub-population with period `delta` evolves at `round`.
inline bool SubpopDue(int round, int delta) { return round % delta == 0; }

struct PoolEntry {
  AgentId id = 0;
  int subpop = 0;
  double fitness = 0.0;

  bool operator==(const PoolEntry&) const = default;
};

// Every agent outside `subpop`, by snapshot fitness descending (id tie-break).
std::vector<PoolEntry> BuildExternalPool(const Population& population, int subpop);

// Compares the migration-open bracket of `subpop` against the external pool in
// order. An agent at least as fit as the current contender is kept and the
// cursor stays; otherwise it is replaced and the cursor advances. A contender
// from a more dynamic sub-population donates weights only and the target takes
// the hyperparameters of the evolving sub-population's best winner; a steadier
// contender donates weights and hyperparameters.
std::vector<EvolutionEvent> Migrate(Population& population, int subpop,
                                    const Brackets& brackets,
                                    std::span<const PoolEntry> pool,
                                    const MfpbtConfig& config,
                                    const EvolutionContext& ctx);

// One barrier of the multi-frequency scheduler: every due sub-population, in
// ascending order, runs truncation selection and then migration.
std::vector<EvolutionEvent> MfpbtRound(Population& population,
                                       const MfpbtConfig& config,
                                       const EvolutionContext& ctx);

}  // namespace mfpbt

#endif  // MFPBT_MFPBT_H_
