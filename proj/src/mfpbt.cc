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

#include "mfpbt/mfpbt.h"

#include <algorithm>

namespace mfpbt {

void ValidateDeltas(std::span<const int> deltas) {
  if (deltas.empty()) throw ConfigError("deltas", "must not be empty");
  if (deltas[0] != 1) throw ConfigError("deltas", "first delta must be 1");
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (deltas[i] <= deltas[i - 1]) {
      throw ConfigError("deltas", "must be strictly increasing");
    }
  }
}

std::vector<PoolEntry> BuildExternalPool(const Population& population, int subpop) {
  std::vector<PoolEntry> pool;
  for (const AgentState& a : population.agents()) {
    if (a.subpop == subpop) continue;
    if (!a.snapshot_fitness) {
      throw std::invalid_argument("agent " + std::to_string(a.id) +
                                  " has no snapshot fitness");
    }
    pool.push_back({a.id, a.subpop, *a.snapshot_fitness});
  }
  std::sort(pool.begin(), pool.end(), [](const PoolEntry& a, const PoolEntry& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.id < b.id;
  });
  return pool;
}

std::vector<EvolutionEvent> Migrate(Population& population, int subpop,
                                    const Brackets& brackets,
                                    std::span<const PoolEntry> pool,
                                    const MfpbtConfig& config,
                                    const EvolutionContext& ctx) {
  std::vector<EvolutionEvent> events;
  if (brackets.winners.empty()) return events;
  const AgentId best_winner = brackets.winners.front();
  const int own_delta = config.deltas.at(static_cast<std::size_t>(subpop));

  std::size_t k = 0;
  for (AgentId candidate : brackets.migration_open) {
    if (k >= pool.size()) break;
    const PoolEntry& contender = pool[k];
    if (*population.agent(candidate).snapshot_fitness >= contender.fitness) continue;

    const int contender_delta = config.deltas.at(static_cast<std::size_t>(contender.subpop));
    EvolutionEvent e;
    e.round = ctx.round;
    e.subpop_id = subpop;
    e.target = candidate;
    e.source = contender.id;
    e.fitness_snapshot = contender.fitness;
    if (config.variance_exploitation) {
      e.kind = EventKind::kMigrationWeightsOnly;
      e.hyperparams_source = candidate;
      e.hyperparams_after = population.agent(candidate).hyperparams;
    } else if (contender_delta < own_delta && !config.symmetric_migration) {
      e.kind = EventKind::kMigrationWeightsOnly;
      e.hyperparams_source = best_winner;
      e.hyperparams_after = population.agent(best_winner).hyperparams;
    } else {
      e.kind = EventKind::kMigrationFull;
      e.hyperparams_source = contender.id;
      e.hyperparams_after = population.agent(contender.id).hyperparams;
    }
    ApplyEvent(population, e);
    events.push_back(std::move(e));
    ++k;
  }
  return events;
}

std::vector<EvolutionEvent> MfpbtRound(Population& population,
                                       const MfpbtConfig& config,
                                       const EvolutionContext& ctx) {
  std::vector<EvolutionEvent> events;
  EvolutionContext step_ctx = ctx;
  step_ctx.variance_exploitation = config.variance_exploitation;
  for (int i = 0; i < population.num_subpops(); ++i) {
    if (!SubpopDue(ctx.round, config.deltas.at(static_cast<std::size_t>(i)))) continue;
    const Brackets brackets = RankSubpop(population, i);
    auto evolved = PbtEvolutionStep(population, i, brackets, step_ctx);
    events.insert(events.end(), evolved.begin(), evolved.end());
    const auto pool = BuildExternalPool(population, i);
    auto migrated = Migrate(population, i, brackets, pool, config, step_ctx);
    events.insert(events.end(), migrated.begin(), migrated.end());
  }
  return events;
}

}  // namespace mfpbt
