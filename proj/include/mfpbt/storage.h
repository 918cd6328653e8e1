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

#ifndef MFPBT_STORAGE_H_
#define MFPBT_STORAGE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfpbt/baselines.h"
#include "mfpbt/config.h"
#include "mfpbt/core.h"
#include "mfpbt/events.h"

namespace mfpbt {

// One row of metrics.csv: an agent's snapshot fitness at the end of a round's
// training, with the hyperparameters it trained with.
struct MetricRow {
  int round = 0;
  AgentId agent_id = 0;
  int subpop_id = 0;
  double fitness = 0.0;
  HyperparamVector hyperparams;

  bool operator==(const MetricRow&) const = default;
};

std::string MetricsHeader(const HyperparamSpace& space);
// Shortest round-trip decimal formatting; no trailing newline.
std::string FormatMetricRow(const MetricRow& row);
MetricRow ParseMetricRow(const std::string& line);

// Agent state after a round's barrier, sufficient to resume the run.
struct Checkpoint {
  int round = 0;
  std::vector<Payload> payloads;
  std::vector<HyperparamVector> hyperparams;
  std::vector<Elite> archive;
};

std::string CheckpointPath(const std::filesystem::path& dir, int round);
void WriteCheckpoint(const std::filesystem::path& dir, const Checkpoint& checkpoint);
Checkpoint ReadCheckpoint(const std::filesystem::path& file);
// Highest round with a checkpoint in `dir`/checkpoints, if any.
std::optional<int> LatestCheckpointRound(const std::filesystem::path& dir);

std::string ReadFile(const std::filesystem::path& file);

// Everything persisted for one run.
struct LoadedRun {
  std::filesystem::path dir;
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::vector<MetricRow> metrics;
  std::vector<EvolutionEvent> events;
};

// Throws std::runtime_error if a required file is missing or malformed.
LoadedRun LoadRun(const std::filesystem::path& dir);

}  // namespace mfpbt

#endif  // MFPBT_STORAGE_H_
