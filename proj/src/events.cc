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

#include "mfpbt/events.h"

#include <stdexcept>

#include "json.hpp"
#include "mfpbt/baselines.h"

namespace mfpbt {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::pair<EventKind, const char*> kKindNames[] = {
    {EventKind::kSurvive, "survive"},
    {EventKind::kPerturbedClone, "perturbed_clone"},
    {EventKind::kMigrationWeightsOnly, "migration_weights_only"},
    {EventKind::kMigrationFull, "migration_full"},
    {EventKind::kEliteRestore, "elite_restore"},
};

template <typename T>
ordered_json Nullable(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

template <typename T>
std::optional<T> ReadNullable(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

}  // namespace

const char* EventKindName(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EventKind ParseEventKind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw std::invalid_argument("unknown event kind '" + std::string(name) + "'");
}

void ApplyEvent(Population& population, const EvolutionEvent& event,
                const EliteArchive* archive) {
  if (!TransfersPayload(event.kind)) return;
  AgentState& target = population.agent(event.target);
  if (event.kind == EventKind::kEliteRestore) {
    if (archive == nullptr || !event.source || !event.source_round) {
      throw std::invalid_argument("elite restore needs an archive and an origin");
    }
    const Elite* elite = archive->Find(*event.source, *event.source_round);
    if (elite == nullptr) {
      throw std::invalid_argument("elite restore references a missing elite");
    }
    target.payload = elite->payload;
  } else {
    if (!event.source) throw std::invalid_argument("transfer event without source");
    target.payload = population.agent(*event.source).payload;
  }
  target.hyperparams = event.hyperparams_after;
}

std::string EventToJsonLine(const EvolutionEvent& event) {
  ordered_json j;
  j["round"] = event.round;
  j["subpop_id"] = event.subpop_id;
  j["target"] = event.target;
  j["kind"] = EventKindName(event.kind);
  j["source"] = Nullable(event.source);
  j["source_round"] = Nullable(event.source_round);
  j["hyperparams_source"] = Nullable(event.hyperparams_source);
  j["hyperparams_after"] = event.hyperparams_after.values();
  j["fitness_snapshot"] = event.fitness_snapshot;
  return j.dump();
}

EvolutionEvent EventFromJsonLine(std::string_view line) {
  const auto j = ordered_json::parse(line);
  EvolutionEvent e;
  e.round = j.at("round").get<int>();
  e.subpop_id = j.at("subpop_id").get<int>();
  e.target = j.at("target").get<int>();
  e.kind = ParseEventKind(j.at("kind").get<std::string>());
  e.source = ReadNullable<int>(j, "source");
  e.source_round = ReadNullable<int>(j, "source_round");
  e.hyperparams_source = ReadNullable<int>(j, "hyperparams_source");
  e.hyperparams_after =
      HyperparamVector(j.at("hyperparams_after").get<std::vector<double>>());
  e.fitness_snapshot = j.at("fitness_snapshot").get<double>();
  return e;
}

}  // namespace mfpbt
