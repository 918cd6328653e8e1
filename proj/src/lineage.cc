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

#include "mfpbt/lineage.h"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <utility>

#include "mfpbt/random.h"
#include "mfpbt/trainable.h"

namespace mfpbt {

namespace {

[[noreturn]] void Broken(int round, const std::string& what) {
  throw LineageError(fmt::format("corrupted event log at round {}: {}", round, what));
}

}  // namespace

LineageLog MakeLineageLog(std::span<const MetricRow> metrics,
                          std::span<const EvolutionEvent> events) {
  LineageLog log;
  for (const MetricRow& row : metrics) {
    log.last_round = std::max(log.last_round, row.round);
    if (row.round != 1) continue;
    const auto id = static_cast<std::size_t>(row.agent_id);
    if (log.subpop_of.size() <= id) {
      log.subpop_of.resize(id + 1, -1);
      log.initial_hyperparams.resize(id + 1);
    }
    log.subpop_of[id] = row.subpop_id;
    log.initial_hyperparams[id] = row.hyperparams;
  }
  for (std::size_t id = 0; id < log.subpop_of.size(); ++id) {
    if (log.subpop_of[id] < 0) {
      throw LineageError(fmt::format("agent {} has no round-1 metrics", id));
    }
  }
  log.events.assign(events.begin(), events.end());
  return log;
}

Lineage::Lineage(LineageLog log) : log_(std::move(log)) {
  const int n = num_agents();
  if (n == 0) throw LineageError("empty lineage log");
  transfers_by_target_.resize(static_cast<std::size_t>(n));
  const auto in_range = [n](const std::optional<AgentId>& id) {
    return id && *id >= 0 && *id < n;
  };
  const std::size_t dims = log_.initial_hyperparams.front().size();
  int previous_round = 1;
  for (std::size_t i = 0; i < log_.events.size(); ++i) {
    const EvolutionEvent& e = log_.events[i];
    if (e.round < previous_round) Broken(e.round, "rounds out of order");
    if (e.round > log_.last_round) Broken(e.round, "event after the last logged round");
    previous_round = e.round;
    if (!in_range(e.target)) Broken(e.round, fmt::format("unknown target {}", e.target));
    if (!TransfersPayload(e.kind)) continue;
    if (!in_range(e.source)) {
      Broken(e.round, fmt::format("{} into agent {} has no valid source",
                                  EventKindName(e.kind), e.target));
    }
    if (!in_range(e.hyperparams_source)) {
      Broken(e.round, fmt::format("{} into agent {} has no valid hyperparameter source",
                                  EventKindName(e.kind), e.target));
    }
    if (e.hyperparams_after.size() != dims) {
      Broken(e.round, fmt::format("{} into agent {} has {} hyperparameters, expected {}",
                                  EventKindName(e.kind), e.target,
                                  e.hyperparams_after.size(), dims));
    }
    if (e.kind == EventKind::kEliteRestore &&
        (!e.source_round || *e.source_round < 1 || *e.source_round > e.round)) {
      Broken(e.round, fmt::format("elite restore into agent {} has no valid source round",
                                  e.target));
    }
    transfers_by_target_[static_cast<std::size_t>(e.target)].push_back(static_cast<int>(i));
  }
}

std::vector<ScheduleSegment> Lineage::Reconstruct(AgentId agent, int query_round) const {
  if (agent < 0 || agent >= num_agents()) {
    throw LineageError(fmt::format("unknown agent {}", agent));
  }
  if (query_round < 1 || query_round > log_.last_round) {
    throw LineageError(fmt::format("round {} outside the logged range [1, {}]",
                                   query_round, log_.last_round));
  }
  const auto first_event_at = [this](int round) {
    const auto it = std::partition_point(
        log_.events.begin(), log_.events.end(),
        [round](const EvolutionEvent& e) { return e.round < round; });
    return static_cast<int>(it - log_.events.begin());
  };

  std::vector<ScheduleSegment> segments;
  AgentId current = agent;
  int end = query_round;
  int bound = first_event_at(query_round);
  while (true) {
    const auto& transfers = transfers_by_target_[static_cast<std::size_t>(current)];
    const auto it = std::lower_bound(transfers.begin(), transfers.end(), bound);
    const int subpop = log_.subpop_of[static_cast<std::size_t>(current)];
    if (it == transfers.begin()) {
      segments.push_back({0, end, current, subpop,
                          log_.initial_hyperparams[static_cast<std::size_t>(current)],
                          current, subpop, std::nullopt});
      break;
    }
    const int index = *std::prev(it);
    const EvolutionEvent& e = log_.events[static_cast<std::size_t>(index)];
    if (e.round < end) {
      segments.push_back(
          {e.round, end, current, subpop, e.hyperparams_after, *e.hyperparams_source,
           log_.subpop_of[static_cast<std::size_t>(*e.hyperparams_source)], e.kind});
    }
    current = *e.source;
    if (e.kind == EventKind::kEliteRestore) {
      end = *e.source_round;
      bound = first_event_at(end);
    } else {
      end = e.round;
      bound = index;
    }
  }
  std::reverse(segments.begin(), segments.end());
  return segments;
}

std::vector<ScheduleSegment> ReconstructSchedule(const LineageLog& log, AgentId agent,
                                                 int query_round) {
  return Lineage(log).Reconstruct(agent, query_round);
}

std::vector<ReplayPoint> ReplaySchedule(std::span<const ScheduleSegment> segments,
                                        const ExperimentConfig& config,
                                        std::uint64_t seed) {
  if (segments.empty()) throw LineageError("empty schedule");
  const ScheduleSegment& root = segments.front();
  if (root.entry_kind || root.start_round != 0) {
    throw LineageError("schedule does not start from an initial agent");
  }
  const StreamFactory streams(seed);
  auto trainable = MakeTrainable(config.trainable, config.search_space);
  Rng init = streams.Stream(root.carrier, StreamKind::kInit);
  const HyperparamVector sampled = SampleHyperparams(config.search_space, init);
  if (sampled != root.hyperparams) {
    throw LineageError(fmt::format(
        "initial hyperparameters of agent {} do not match its init stream", root.carrier));
  }
  trainable->Init(init, sampled);

  std::vector<ReplayPoint> trace;
  const int steps = static_cast<int>(config.t_ready);
  for (const ScheduleSegment& segment : segments) {
    trainable->SetHyperparams(segment.hyperparams);
    for (int round = segment.start_round + 1; round <= segment.end_round; ++round) {
      Rng train = streams.Stream(segment.carrier, StreamKind::kTrain, round);
      trainable->Train(steps, train);
      Rng eval = streams.Stream(segment.carrier, StreamKind::kEval, round);
      trace.push_back({round, segment.carrier, trainable->Evaluate(config.eval_repeats, eval)});
    }
  }
  return trace;
}

std::string ReplayDivergence::Describe() const {
  return fmt::format("replay diverges at round {} (agent {}): logged {}, replayed {}",
                     round, carrier, logged, replayed);
}

std::optional<ReplayDivergence> FirstDivergence(std::span<const ReplayPoint> trace,
                                                std::span<const MetricRow> metrics) {
  std::map<std::pair<int, AgentId>, double> logged;
  for (const MetricRow& row : metrics) logged[{row.round, row.agent_id}] = row.fitness;
  for (const ReplayPoint& p : trace) {
    const auto it = logged.find({p.round, p.carrier});
    if (it == logged.end()) {
      return ReplayDivergence{p.round, p.carrier,
                              std::numeric_limits<double>::quiet_NaN(), p.fitness};
    }
    if (it->second != p.fitness) {
      return ReplayDivergence{p.round, p.carrier, it->second, p.fitness};
    }
  }
  return std::nullopt;
}

AgentId BestAgentAt(std::span<const MetricRow> metrics, int round) {
  std::optional<MetricRow> best;
  for (const MetricRow& row : metrics) {
    if (row.round != round) continue;
    if (!best || row.fitness > best->fitness ||
        (row.fitness == best->fitness && row.agent_id < best->agent_id)) {
      best = row;
    }
  }
  if (!best) throw LineageError(fmt::format("no metrics logged for round {}", round));
  return best->agent_id;
}

void WriteScheduleCsv(std::ostream& out, std::span<const ScheduleSegment> segments,
                      const HyperparamSpace& space) {
  out << "start_round,end_round,carrier,subpop_id,hyperparams_source,"
         "hyperparams_subpop_id,entry_kind";
  for (const auto& entry : space.entries()) out << "," << entry.name;
  out << "\n";
  for (const ScheduleSegment& s : segments) {
    out << fmt::format("{},{},{},{},{},{},{}", s.start_round, s.end_round, s.carrier,
                       s.subpop_id, s.hyperparams_source, s.hyperparams_subpop_id,
                       s.entry_kind ? EventKindName(*s.entry_kind) : "initial");
    for (double v : s.hyperparams.values()) out << fmt::format(",{}", v);
    out << "\n";
  }
}

}  // namespace mfpbt
