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

#ifndef MFPBT_LINEAGE_H_
#define MFPBT_LINEAGE_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpbt/config.h"
#include "mfpbt/core.h"
#include "mfpbt/events.h"
#include "mfpbt/storage.h"

namespace mfpbt {

// Training rounds (start_round, end_round] performed by `carrier` with a fixed
// hyperparameter vector. `subpop_id` attributes the payload (the carrier's
// sub-population); `hyperparams_subpop_id` attributes the hyperparameters.
struct ScheduleSegment {
  int start_round = 0;
  int end_round = 0;
  AgentId carrier = 0;
  int subpop_id = 0;
  HyperparamVector hyperparams;
  AgentId hyperparams_source = 0;
  int hyperparams_subpop_id = 0;
  // Event that handed the payload to the carrier; empty for the root segment.
  std::optional<EventKind> entry_kind;

  bool operator==(const ScheduleSegment&) const = default;
};

// Malformed or inconsistent event log.
class LineageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything reconstruction needs from a run.
struct LineageLog {
  std::vector<int> subpop_of;
  std::vector<HyperparamVector> initial_hyperparams;
  int last_round = 0;
  std::vector<EvolutionEvent> events;
};

// Builds a log from round-1 metrics (initial hyperparameters and layout) and
// the event list.
LineageLog MakeLineageLog(std::span<const MetricRow> metrics,
                          std::span<const EvolutionEvent> events);

// Validated, indexed event log answering ancestry queries.
class Lineage {
 public:
  // Throws LineageError naming the first broken round.
  explicit Lineage(LineageLog log);

  int num_agents() const { return static_cast<int>(log_.subpop_of.size()); }
  int last_round() const { return log_.last_round; }

  // Segments in forward order ending at `query_round`. Consecutive segments
  // share a boundary round except after an elite restore, where the earlier
  // segment ends at the round the elite was recorded.
  std::vector<ScheduleSegment> Reconstruct(AgentId agent, int query_round) const;

 private:
  LineageLog log_;
  std::vector<std::vector<int>> transfers_by_target_;
};

std::vector<ScheduleSegment> ReconstructSchedule(const LineageLog& log, AgentId agent,
                                                 int query_round);

struct ReplayPoint {
  int round = 0;
  AgentId carrier = 0;
  double fitness = 0.0;
};

// Re-runs a fresh trainable along `segments`: initialised from the root
// carrier's init stream, then trained and evaluated each round with the
// carrier's streams for that round. Returns one point per trained round.
std::vector<ReplayPoint> ReplaySchedule(std::span<const ScheduleSegment> segments,
                                        const ExperimentConfig& config,
                                        std::uint64_t seed);

struct ReplayDivergence {
  int round = 0;
  AgentId carrier = 0;
  double logged = 0.0;
  double replayed = 0.0;
  std::string Describe() const;
};

// First replay point whose fitness differs from the logged metric (or has no
// logged metric).
std::optional<ReplayDivergence> FirstDivergence(std::span<const ReplayPoint> trace,
                                                std::span<const MetricRow> metrics);

// Agent with the highest logged fitness at `round`, lowest id on ties.
AgentId BestAgentAt(std::span<const MetricRow> metrics, int round);

void WriteScheduleCsv(std::ostream& out, std::span<const ScheduleSegment> segments,
                      const HyperparamSpace& space);

}  // namespace mfpbt

#endif  // MFPBT_LINEAGE_H_
