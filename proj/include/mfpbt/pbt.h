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

#ifndef MFPBT_PBT_H_
#define MFPBT_PBT_H_

#include <utility>
#include <vector>

#include "mfpbt/core.h"
#include "mfpbt/events.h"
#include "mfpbt/random.h"

namespace mfpbt {

// Per-round inputs shared by all scheduler steps.
struct EvolutionContext {
  int round = 0;
  const StreamFactory* streams = nullptr;
  const HyperparamSpace* space = nullptr;
  // Losers and migrants take weights only; hyperparameters never change.
  bool variance_exploitation = false;
  // Clamp perturbed values into the initial sampling range.
  bool clamp_hyperparams = false;
};

// Pairs the k-th loser with the (k mod |winners|)-th winner.
std::vector<std::pair<AgentId, AgentId>> Exploit(const Brackets& brackets);

// Multiplies every entry independently by 0.8 or 1.25 with equal probability.
HyperparamVector ExplorePerturb(const HyperparamVector& hyperparams, Rng& rng);

HyperparamVector ClampToSpace(const HyperparamVector& hyperparams,
                              const HyperparamSpace& space);

// Ranks one sub-population by snapshot fitness and splits it into quarters.
Brackets RankSubpop(const Population& population, int subpop);

// Truncation selection on one sub-population: each loser receives its
// winner's payload and a perturbed copy of the winner's hyperparameters.
// Emits survive events for the top three quarters (in rank order) followed by
// one perturbed_clone per loser, applying each clone as it is emitted.
std::vector<EvolutionEvent> PbtEvolutionStep(Population& population, int subpop,
                                             const Brackets& brackets,
                                             const EvolutionContext& ctx);

// Whole-population PBT evolving every `delta` rounds.
std::vector<EvolutionEvent> PbtRound(Population& population, int delta,
                                     const EvolutionContext& ctx);

}  // namespace mfpbt

#endif  // MFPBT_PBT_H_
