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

#include "mfpbt/baselines.h"

#include <algorithm>
#include <stdexcept>

namespace mfpbt {

bool EliteBefore(double fitness_a, AgentId origin_a, int round_a, double fitness_b,
                 AgentId origin_b, int round_b) {
  if (fitness_a != fitness_b) return fitness_a > fitness_b;
  if (origin_a != origin_b) return origin_a < origin_b;
  return round_a < round_b;
}

EliteArchive::EliteArchive(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw ConfigError("backtrack.elites", "must be non-negative");
}

const Elite* EliteArchive::Find(AgentId origin, int round) const {
  for (const Elite& e : entries_) {
    if (e.origin == origin && e.round == round) return &e;
  }
  return nullptr;
}

void EliteArchive::Update(const Population& population, int round) {
  struct Candidate {
    double fitness;
    AgentId origin;
    int round;
    int archived;  // index into entries_, or -1 for a live agent
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    candidates.push_back({entries_[i].fitness, entries_[i].origin, entries_[i].round,
                          static_cast<int>(i)});
  }
  for (const AgentState& a : population.agents()) {
    if (!a.snapshot_fitness) {
      throw std::invalid_argument("agent " + std::to_string(a.id) +
                                  " has no snapshot fitness");
    }
    candidates.push_back({*a.snapshot_fitness, a.id, round, -1});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return EliteBefore(a.fitness, a.origin, a.round, b.fitness, b.origin,
                                 b.round);
            });
  candidates.resize(std::min(candidates.size(), static_cast<std::size_t>(capacity_)));

  std::vector<Elite> next;
  next.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    if (c.archived >= 0) {
      next.push_back(std::move(entries_[static_cast<std::size_t>(c.archived)]));
    } else {
      const AgentState& a = population.agent(c.origin);
      next.push_back({a.payload, a.hyperparams, c.fitness, c.origin, c.round});
    }
  }
  entries_ = std::move(next);
}

void EliteArchive::Restore(std::vector<Elite> entries) {
  if (entries.size() > static_cast<std::size_t>(capacity_)) {
    throw std::invalid_argument("elite archive over capacity");
  }
  entries_ = std::move(entries);
}

std::vector<EvolutionEvent> Backtrack(Population& population,
                                      const EliteArchive& archive,
                                      std::span<const double> fitness, int round) {
  std::vector<EvolutionEvent> events;
  if (archive.empty()) return events;
  if (fitness.size() != static_cast<std::size_t>(population.size())) {
    throw std::invalid_argument("one fitness value per agent is required");
  }
  std::vector<std::pair<AgentId, double>> ranked_input;
  for (AgentId id = 0; id < population.size(); ++id) {
    ranked_input.emplace_back(id, fitness[static_cast<std::size_t>(id)]);
  }
  const auto ranked = RankDescending(ranked_input);
  const int count = std::min(archive.capacity(), population.size() / 2);
  const auto& elites = archive.entries();
  for (int k = 0; k < count; ++k) {
    const AgentId target = ranked[ranked.size() - static_cast<std::size_t>(count) +
                                  static_cast<std::size_t>(k)];
    const Elite& elite = elites[static_cast<std::size_t>(k) % elites.size()];
    EvolutionEvent e;
    e.round = round;
    e.subpop_id = population.agent(target).subpop;
    e.target = target;
    e.kind = EventKind::kEliteRestore;
    e.source = elite.origin;
    e.source_round = elite.round;
    e.hyperparams_source = elite.origin;
    e.hyperparams_after = elite.hyperparams;
    e.fitness_snapshot = elite.fitness;
    ApplyEvent(population, e, &archive);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<EvolutionEvent> Backtrack(Population& population,
                                      const EliteArchive& archive, int round) {
  std::vector<double> fitness;
  for (const AgentState& a : population.agents()) {
    if (!a.snapshot_fitness) {
      throw std::invalid_argument("agent " + std::to_string(a.id) +
                                  " has no snapshot fitness");
    }
    fitness.push_back(*a.snapshot_fitness);
  }
  return Backtrack(population, archive, fitness, round);
}

std::vector<EvolutionEvent> PbtBtRound(Population& population, EliteArchive& archive,
                                       const BacktrackConfig& config, int delta,
                                       const EvolutionContext& ctx) {
  archive.Update(population, ctx.round);
  auto events = PbtRound(population, delta, ctx);
  if (config.period > 0 && ctx.round % config.period == 0) {
    std::vector<double> fitness;
    for (const AgentState& a : population.agents()) fitness.push_back(*a.snapshot_fitness);
    for (const EvolutionEvent& e : events) {
      if (TransfersPayload(e.kind)) {
        fitness[static_cast<std::size_t>(e.target)] = e.fitness_snapshot;
      }
    }
    auto restored = Backtrack(population, archive, fitness, ctx.round);
    events.insert(events.end(), restored.begin(), restored.end());
  }
  return events;
}

}  // namespace mfpbt
