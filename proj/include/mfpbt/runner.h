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

#ifndef MFPBT_RUNNER_H_
#define MFPBT_RUNNER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpbt/config.h"
#include "mfpbt/core.h"
#include "mfpbt/events.h"
#include "mfpbt/storage.h"
#include "mfpbt/trainable.h"

namespace mfpbt {

// A trainable failed or produced a non-finite fitness. Logs of every completed
// round have been flushed before this is thrown.
class RunError : public std::runtime_error {
 public:
  RunError(int round, int agent_id, const std::string& message)
      : std::runtime_error("round " + std::to_string(round) + ", agent " +
                           std::to_string(agent_id) + ": " + message),
        round_(round),
        agent_id_(agent_id) {}

  int round() const { return round_; }
  int agent_id() const { return agent_id_; }

 private:
  int round_;
  int agent_id_;
};

// Fixed-size fork/join pool for the train and evaluate phases. Work items are
// distributed statically; the first failure by item index is rethrown after
// all workers have joined.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);

  int workers() const { return workers_; }
  void ParallelFor(int count, const std::function<void(int)>& fn) const;

 private:
  int workers_;
};

struct RunOptions {
  int workers = 1;
  // Empty: keep everything in memory.
  std::string output_dir;
  // Continue from the latest checkpoint in output_dir.
  bool resume = false;
  // Stop after this round (0: run to completion). Used to exercise resuming.
  int stop_after_round = 0;
};

struct AgentSummary {
  AgentId id = 0;
  int subpop = 0;
  double fitness = 0.0;
  HyperparamVector hyperparams;
};

struct WallClock {
  double total_seconds = 0.0;
  double train_seconds = 0.0;
  double eval_seconds = 0.0;
  double barrier_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  int rounds_completed = 0;
  std::vector<MetricRow> metrics;
  std::vector<EvolutionEvent> events;
  std::vector<AgentSummary> final_population;
  WallClock wall_clock;

  // Highest snapshot fitness per round, rounds 1..rounds_completed.
  std::vector<double> BestCurve() const;
  // Mean snapshot fitness per round.
  std::vector<double> MeanCurve() const;
};

// Writes each agent's mean-of-`eval_repeats` fitness into its snapshot. Each
// agent draws from its own evaluation stream for `round`. Throws RunError on a
// non-finite value.
void EvaluateAll(std::span<const std::unique_ptr<Trainable>> trainables,
                 Population& population, int eval_repeats,
                 const StreamFactory& streams, int round, const WorkerPool& pool);

// Builds the initial population: hyperparameters are sampled from, and the
// trainable initialised with, each agent's init stream.
Population InitPopulation(const ExperimentConfig& config, const StreamFactory& streams,
                          std::vector<std::unique_ptr<Trainable>>& trainables);

// Runs total_steps / t_ready rounds of train -> evaluate -> barrier. Output is
// bit-reproducible for a fixed (config, seed) regardless of worker count.
ExperimentResult RunExperiment(const ExperimentConfig& config, std::uint64_t seed,
                               const RunOptions& options = {});

}  // namespace mfpbt

#endif  // MFPBT_RUNNER_H_
