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

#include "mfpbt/pbt.h"

#include <algorithm>
#include <stdexcept>

namespace mfpbt {

std::vector<std::pair<AgentId, AgentId>> Exploit(const Brackets& brackets) {
  std::vector<std::pair<AgentId, AgentId>> pairs;
  if (brackets.winners.empty()) return pairs;
  pairs.reserve(brackets.losers.size());
  for (std::size_t k = 0; k < brackets.losers.size(); ++k) {
    pairs.emplace_back(brackets.losers[k],
                       brackets.winners[k % brackets.winners.size()]);
  }
  return pairs;
}

HyperparamVector ExplorePerturb(const HyperparamVector& hyperparams, Rng& rng) {
  std::vector<double> values = hyperparams.values();
  for (double& v : values) v *= rng.Coin() ? 1.25 : 0.8;
  return HyperparamVector(std::move(values));
}

HyperparamVector ClampToSpace(const HyperparamVector& hyperparams,
                              const HyperparamSpace& space) {
  std::vector<double> values = hyperparams.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& e = space.entries().at(i);
    values[i] = std::clamp(values[i], e.low, e.high);
  }
  return HyperparamVector(std::move(values));
}

Brackets RankSubpop(const Population& population, int subpop) {
  const auto members = population.Members(subpop);
  const auto fitnesses = population.Fitnesses(members);
  return ComputeBrackets(RankDescending(fitnesses));
}

std::vector<EvolutionEvent> PbtEvolutionStep(Population& population, int subpop,
                                             const Brackets& brackets,
                                             const EvolutionContext& ctx) {
  auto fitness_of = [&](AgentId id) {
    const auto& f = population.agent(id).snapshot_fitness;
    if (!f) {
      throw std::invalid_argument("agent " + std::to_string(id) +
                                  " has no snapshot fitness");
    }
    return *f;
  };

  std::vector<EvolutionEvent> events;
  for (const auto* bracket :
       {&brackets.winners, &brackets.survivors, &brackets.migration_open}) {
    for (AgentId id : *bracket) {
      EvolutionEvent e;
      e.round = ctx.round;
      e.subpop_id = subpop;
      e.target = id;
      e.kind = EventKind::kSurvive;
      e.hyperparams_source = id;
      e.hyperparams_after = population.agent(id).hyperparams;
      e.fitness_snapshot = fitness_of(id);
      events.push_back(std::move(e));
    }
  }

  for (const auto& [loser, winner] : Exploit(brackets)) {
    fitness_of(loser);
    EvolutionEvent e;
    e.round = ctx.round;
    e.subpop_id = subpop;
    e.target = loser;
    e.kind = EventKind::kPerturbedClone;
    e.source = winner;
    e.fitness_snapshot = fitness_of(winner);
    if (ctx.variance_exploitation) {
      e.hyperparams_source = loser;
      e.hyperparams_after = population.agent(loser).hyperparams;
    } else {
      Rng rng = ctx.streams->Stream(loser, StreamKind::kEvolve, ctx.round);
      HyperparamVector h = ExplorePerturb(population.agent(winner).hyperparams, rng);
      if (ctx.clamp_hyperparams) h = ClampToSpace(h, *ctx.space);
      e.hyperparams_source = winner;
      e.hyperparams_after = std::move(h);
    }
    ApplyEvent(population, e);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<EvolutionEvent> PbtRound(Population& population, int delta,
                                     const EvolutionContext& ctx) {
  if (ctx.round % delta != 0) return {};
  std::vector<EvolutionEvent> events;
  for (int i = 0; i < population.num_subpops(); ++i) {
    const Brackets brackets = RankSubpop(population, i);
    auto step = PbtEvolutionStep(population, i, brackets, ctx);
    events.insert(events.end(), step.begin(), step.end());
  }
  return events;
}

}  // namespace mfpbt
