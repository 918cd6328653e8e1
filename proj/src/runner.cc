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

#include "mfpbt/runner.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mfpbt/baselines.h"
#include "mfpbt/mfpbt.h"
#include "mfpbt/pbt.h"

namespace mfpbt {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

WorkerPool::WorkerPool(int workers) : workers_(std::max(1, workers)) {}

void WorkerPool::ParallelFor(int count, const std::function<void(int)>& fn) const {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  auto run_slice = [&](int worker) {
    for (int i = worker; i < count; i += workers_) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers_ == 1 || count <= 1) {
    run_slice(0);
  } else {
    std::vector<std::jthread> threads;
    const int used = std::min(workers_, count);
    threads.reserve(static_cast<std::size_t>(used));
    for (int w = 0; w < used; ++w) threads.emplace_back(run_slice, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> ExperimentResult::BestCurve() const {
  std::vector<double> best(static_cast<std::size_t>(rounds_completed),
                           -std::numeric_limits<double>::infinity());
  for (const MetricRow& row : metrics) {
    auto& b = best.at(static_cast<std::size_t>(row.round - 1));
    b = std::max(b, row.fitness);
  }
  return best;
}

std::vector<double> ExperimentResult::MeanCurve() const {
  std::vector<double> sum(static_cast<std::size_t>(rounds_completed), 0.0);
  std::vector<int> count(sum.size(), 0);
  for (const MetricRow& row : metrics) {
    sum.at(static_cast<std::size_t>(row.round - 1)) += row.fitness;
    ++count[static_cast<std::size_t>(row.round - 1)];
  }
  for (std::size_t r = 0; r < sum.size(); ++r) sum[r] /= std::max(1, count[r]);
  return sum;
}

void EvaluateAll(std::span<const std::unique_ptr<Trainable>> trainables,
                 Population& population, int eval_repeats,
                 const StreamFactory& streams, int round, const WorkerPool& pool) {
  std::vector<double> fitness(trainables.size());
  pool.ParallelFor(static_cast<int>(trainables.size()), [&](int i) {
    Rng rng = streams.Stream(i, StreamKind::kEval, round);
    fitness[static_cast<std::size_t>(i)] =
        trainables[static_cast<std::size_t>(i)]->Evaluate(eval_repeats, rng);
  });
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    if (!std::isfinite(fitness[i])) {
      throw RunError(round, static_cast<int>(i), "non-finite evaluation");
    }
    population.agent(static_cast<AgentId>(i)).snapshot_fitness = fitness[i];
  }
}

Population InitPopulation(const ExperimentConfig& config, const StreamFactory& streams,
                          std::vector<std::unique_ptr<Trainable>>& trainables) {
  const int n = config.population_size / config.num_subpops;
  std::vector<AgentState> agents;
  trainables.clear();
  for (AgentId id = 0; id < config.population_size; ++id) {
    Rng rng = streams.Stream(id, StreamKind::kInit);
    AgentState a;
    a.id = id;
    a.subpop = id / n;
    a.hyperparams = SampleHyperparams(config.search_space, rng);
    auto t = MakeTrainable(config.trainable, config.search_space);
    t->Init(rng, a.hyperparams);
    a.payload = t->ExportPayload();
    agents.push_back(std::move(a));
    trainables.push_back(std::move(t));
  }
  return Population(std::move(agents), config.num_subpops);
}

namespace {

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Append-only persistence of one run directory.
class RunWriter {
 public:
  RunWriter(fs::path dir, const ExperimentConfig& config) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / "config.json") << SerializeConfig(config);
  }

  void Start(const std::string& header, std::span<const MetricRow> kept_metrics,
             std::span<const EvolutionEvent> kept_events) {
    metrics_.open(dir_ / "metrics.csv", std::ios::trunc);
    metrics_ << header << "\n";
    for (const MetricRow& row : kept_metrics) metrics_ << FormatMetricRow(row) << "\n";
    events_.open(dir_ / "events.jsonl", std::ios::trunc);
    for (const EvolutionEvent& e : kept_events) events_ << EventToJsonLine(e) << "\n";
    Flush();
  }

  void Append(std::span<const MetricRow> rows, std::span<const EvolutionEvent> events) {
    for (const MetricRow& row : rows) metrics_ << FormatMetricRow(row) << "\n";
    for (const EvolutionEvent& e : events) events_ << EventToJsonLine(e) << "\n";
    Flush();
  }

  void Flush() {
    metrics_.flush();
    events_.flush();
    if (!metrics_ || !events_) throw std::runtime_error("failed writing " + dir_.string());
  }

  void WriteResult(const ExperimentResult& result, const std::string& status,
                   const std::string& error, int workers) {
    ordered_json j;
    j["name"] = result.config.name;
    j["algorithm"] = AlgorithmName(result.config.algorithm);
    j["seed"] = result.seed;
    j["status"] = status;
    if (!error.empty()) j["error"] = error;
    j["rounds"] = result.config.num_rounds();
    j["rounds_completed"] = result.rounds_completed;
    j["num_events"] = result.events.size();
    const auto best = result.BestCurve();
    j["best_curve"] = best;
    if (!result.final_population.empty()) {
      const auto top = std::max_element(
          result.final_population.begin(), result.final_population.end(),
          [](const AgentSummary& a, const AgentSummary& b) {
            return a.fitness < b.fitness || (a.fitness == b.fitness && a.id > b.id);
          });
      j["best_agent"] = top->id;
      j["best_final_fitness"] = top->fitness;
    }
    ordered_json agents = ordered_json::array();
    for (const AgentSummary& a : result.final_population) {
      agents.push_back({{"id", a.id},
                        {"subpop", a.subpop},
                        {"fitness", a.fitness},
                        {"hyperparams", a.hyperparams.values()}});
    }
    j["final_population"] = agents;
    j["wall_clock"] = {{"total_seconds", result.wall_clock.total_seconds},
                       {"train_seconds", result.wall_clock.train_seconds},
                       {"eval_seconds", result.wall_clock.eval_seconds},
                       {"barrier_seconds", result.wall_clock.barrier_seconds},
                       {"workers", workers}};
    std::ofstream(dir_ / "result.json") << j.dump(2) << "\n";
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::ofstream metrics_;
  std::ofstream events_;
};

// Scheduler state that survives across rounds.
struct SchedulerState {
  EliteArchive archive;
};

std::vector<EvolutionEvent> RunBarrier(const ExperimentConfig& config,
                                       Population& population, SchedulerState& state,
                                       const EvolutionContext& ctx) {
  switch (config.algorithm) {
    case Algorithm::kRs:
      return RsRound(population);
    case Algorithm::kPbt:
      return PbtRound(population, config.deltas.front(), ctx);
    case Algorithm::kMfpbt:
      return MfpbtRound(population, config.mfpbt(), ctx);
    case Algorithm::kPbtBt:
      return PbtBtRound(population, state.archive, *config.backtrack,
                        config.deltas.front(), ctx);
  }
  return {};
}

}  // namespace

ExperimentResult RunExperiment(const ExperimentConfig& config, std::uint64_t seed,
                               const RunOptions& options) {
  Validate(config);
  const auto start = std::chrono::steady_clock::now();
  const StreamFactory streams(seed);
  const WorkerPool pool(options.workers);

  ExperimentResult result;
  result.config = config;
  result.config.seeds = {seed};
  result.seed = seed;

  std::vector<std::unique_ptr<Trainable>> trainables;
  Population population = InitPopulation(config, streams, trainables);
  SchedulerState state{EliteArchive(config.backtrack ? config.backtrack->elites : 0)};

  std::optional<RunWriter> writer;
  int first_round = 1;
  if (!options.output_dir.empty()) {
    result.config.output_dir.clear();
    const fs::path dir(options.output_dir);
    std::optional<int> resume_round;
    if (options.resume) resume_round = LatestCheckpointRound(dir);
    if (resume_round) {
      const Checkpoint cp = ReadCheckpoint(CheckpointPath(dir, *resume_round));
      if (cp.payloads.size() != trainables.size()) {
        throw std::runtime_error("checkpoint does not match population size");
      }
      for (std::size_t i = 0; i < trainables.size(); ++i) {
        AgentState& a = population.agent(static_cast<AgentId>(i));
        a.payload = cp.payloads[i];
        a.hyperparams = cp.hyperparams[i];
        trainables[i]->ImportPayload(a.payload);
        trainables[i]->SetHyperparams(a.hyperparams);
      }
      state.archive.Restore(cp.archive);
      // Keep only what the checkpoint covers.
      const LoadedRun previous = LoadRun(dir);
      for (const MetricRow& row : previous.metrics) {
        if (row.round <= *resume_round) result.metrics.push_back(row);
      }
      for (const EvolutionEvent& e : previous.events) {
        if (e.round <= *resume_round) result.events.push_back(e);
      }
      first_round = *resume_round + 1;
      result.rounds_completed = *resume_round;
    }
    writer.emplace(dir, result.config);
    writer->Start(MetricsHeader(config.search_space), result.metrics, result.events);
  }

  const int last_round = options.stop_after_round > 0
                             ? std::min(options.stop_after_round, config.num_rounds())
                             : config.num_rounds();
  const int steps = static_cast<int>(config.t_ready);
  try {
    for (int round = first_round; round <= last_round; ++round) {
      auto phase = std::chrono::steady_clock::now();
      pool.ParallelFor(population.size(), [&](int i) {
        Rng rng = streams.Stream(i, StreamKind::kTrain, round);
        try {
          trainables[static_cast<std::size_t>(i)]->Train(steps, rng);
        } catch (const std::exception& e) {
          throw RunError(round, i, e.what());
        }
      });
      result.wall_clock.train_seconds += Seconds(phase);

      phase = std::chrono::steady_clock::now();
      EvaluateAll(trainables, population, config.eval_repeats, streams, round, pool);
      result.wall_clock.eval_seconds += Seconds(phase);

      phase = std::chrono::steady_clock::now();
      std::vector<MetricRow> rows;
      rows.reserve(static_cast<std::size_t>(population.size()));
      for (AgentState& a : population.agents()) {
        a.payload = trainables[static_cast<std::size_t>(a.id)]->ExportPayload();
        rows.push_back({round, a.id, a.subpop, *a.snapshot_fitness, a.hyperparams});
      }

      EvolutionContext ctx;
      ctx.round = round;
      ctx.streams = &streams;
      ctx.space = &config.search_space;
      ctx.variance_exploitation = config.variance_exploitation;
      ctx.clamp_hyperparams = config.clamp_hyperparams;
      auto events = RunBarrier(config, population, state, ctx);

      std::vector<bool> touched(static_cast<std::size_t>(population.size()), false);
      for (const EvolutionEvent& e : events) {
        if (TransfersPayload(e.kind)) touched[static_cast<std::size_t>(e.target)] = true;
      }
      for (AgentId id = 0; id < population.size(); ++id) {
        if (!touched[static_cast<std::size_t>(id)]) continue;
        const AgentState& a = population.agent(id);
        trainables[static_cast<std::size_t>(id)]->ImportPayload(a.payload);
        trainables[static_cast<std::size_t>(id)]->SetHyperparams(a.hyperparams);
      }
      result.wall_clock.barrier_seconds += Seconds(phase);

      if (writer) {
        writer->Append(rows, events);
        if (config.checkpoints) {
          Checkpoint cp;
          cp.round = round;
          for (const AgentState& a : population.agents()) {
            cp.payloads.push_back(a.payload);
            cp.hyperparams.push_back(a.hyperparams);
          }
          cp.archive = state.archive.entries();
          WriteCheckpoint(writer->dir(), cp);
        }
      }
      result.metrics.insert(result.metrics.end(), rows.begin(), rows.end());
      result.events.insert(result.events.end(), std::make_move_iterator(events.begin()),
                           std::make_move_iterator(events.end()));
      result.rounds_completed = round;
    }
  } catch (const std::exception& e) {
    result.wall_clock.total_seconds = Seconds(start);
    if (writer) {
      writer->Flush();
      writer->WriteResult(result, "aborted", e.what(), pool.workers());
    }
    throw;
  }

  for (const AgentState& a : population.agents()) {
    result.final_population.push_back(
        {a.id, a.subpop, a.snapshot_fitness.value_or(0.0), a.hyperparams});
  }
  // Report the fitness of record from the last evaluated round.
  if (result.rounds_completed > 0) {
    for (const MetricRow& row : result.metrics) {
      if (row.round == result.rounds_completed) {
        result.final_population[static_cast<std::size_t>(row.agent_id)].fitness = row.fitness;
      }
    }
  }
  result.wall_clock.total_seconds = Seconds(start);
  if (writer) {
    writer->WriteResult(result,
                        result.rounds_completed == config.num_rounds() ? "completed"
                                                                       : "interrupted",
                        "", pool.workers());
  }
  return result;
}

}  // namespace mfpbt
