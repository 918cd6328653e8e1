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

#ifndef MFPBT_EVENTS_H_
#define MFPBT_EVENTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfpbt/core.h"

namespace mfpbt {

class EliteArchive;

enum class EventKind {
  kSurvive,
  kPerturbedClone,
  kMigrationWeightsOnly,
  kMigrationFull,
  kEliteRestore,
};

const char* EventKindName(EventKind kind);
// Throws std::invalid_argument for unknown names.
EventKind ParseEventKind(std::string_view name);

// True for every kind that overwrites the target's payload.
inline bool TransfersPayload(EventKind kind) { return kind != EventKind::kSurvive; }

// One evolution action applied at the round barrier. Events of a round are
// applied in emission order, each reading the live state left by its
// predecessors.
struct EvolutionEvent {
  int round = 0;
  int subpop_id = 0;
  AgentId target = 0;
  EventKind kind = EventKind::kSurvive;
  // Payload donor. For elite restores this is the agent the elite was
  // recorded from, and `source_round` the round it was recorded at.
  std::optional<AgentId> source;
  std::optional<int> source_round;
  // Agent whose hyperparameters the target now carries (the evolving
  // sub-population's best winner for weights-only migrations).
  std::optional<AgentId> hyperparams_source;
  HyperparamVector hyperparams_after;
  // Round snapshot fitness of the payload the target holds after the event.
  double fitness_snapshot = 0.0;

  bool operator==(const EvolutionEvent&) const = default;
};

// Applies `event` to `population`: copies the donor payload (from the live
// population, or from `archive` for elite restores) and sets the target's
// hyperparameters to `hyperparams_after`. Survive events are no-ops.
void ApplyEvent(Population& population, const EvolutionEvent& event,
                const EliteArchive* archive = nullptr);

// One compact JSON object with a fixed key order, no trailing newline.
std::string EventToJsonLine(const EvolutionEvent& event);
EvolutionEvent EventFromJsonLine(std::string_view line);

}  // namespace mfpbt

#endif  // MFPBT_EVENTS_H_
