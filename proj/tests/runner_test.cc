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

#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <set>

#include "fixtures.h"
#include "json.hpp"

namespace mfpbt {
namespace {

using testing::SmallConfig;
using testing::TempDir;

RunOptions ToDir(const std::filesystem::path& dir, int workers = 1) {
  RunOptions o;
  o.workers = workers;
  o.output_dir = dir.string();
  return o;
}

TEST(WorkerPoolTest, RunsEveryItemOnce) {
  for (int workers : {1, 2, 5}) {
    const WorkerPool pool(workers);
    std::vector<std::atomic<int>> hits(37);
    pool.ParallelFor(37, [&](int i) { ++hits[static_cast<std::size_t>(i)]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(WorkerPoolTest, RethrowsLowestFailingItem) {
  const WorkerPool pool(3);
  try {
    pool.ParallelFor(10, [](int i) {
      if (i == 4 || i == 7) throw std::runtime_error("item " + std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "item 4");
  }
}

TEST(RunExperimentTest, RandomSearchLogsEveryRoundAndNoEvents) {
  ExperimentConfig c = SmallConfig(Algorithm::kRs);
  const ExperimentResult r = RunExperiment(c, 3);
  EXPECT_EQ(r.rounds_completed, 10);
  EXPECT_TRUE(r.events.empty());
  std::map<AgentId, int> rows;
  std::map<AgentId, HyperparamVector> first;
  for (const MetricRow& row : r.metrics) {
    ++rows[row.agent_id];
    if (row.round == 1) first[row.agent_id] = row.hyperparams;
    EXPECT_EQ(row.hyperparams, first[row.agent_id]);
  }
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& [id, count] : rows) EXPECT_EQ(count, 10);
}

TEST(RunExperimentTest, GatingFollowsDeltas) {
  ExperimentConfig c = SmallConfig();
  c.total_steps = 4 * c.t_ready;
  const ExperimentResult r = RunExperiment(c, 1);
  std::map<int, std::set<int>> evolved;
  for (const EvolutionEvent& e : r.events) evolved[e.subpop_id].insert(e.round);
  EXPECT_EQ(evolved[0], (std::set<int>{1, 2, 3, 4}));
  EXPECT_EQ(evolved[1], (std::set<int>{2, 4}));
}

TEST(RunExperimentTest, MembershipAndCountConserved) {
  const ExperimentResult r = RunExperiment(SmallConfig(), 2);
  std::map<int, int> per_round;
  for (const MetricRow& row : r.metrics) {
    ++per_round[row.round];
    EXPECT_EQ(row.subpop_id, row.agent_id / 4);
  }
  for (const auto& [round, count] : per_round) EXPECT_EQ(count, 8);
  EXPECT_EQ(r.final_population.size(), 8u);
}

TEST(RunExperimentTest, InvalidConfigFailsBeforeTraining) {
  ExperimentConfig c = SmallConfig();
  c.deltas = {1, 1};
  TempDir dir("invalid");
  EXPECT_THROW(RunExperiment(c, 1, ToDir(dir.path() / "run")), ConfigError);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "run"));
}

std::string Slurp(const std::filesystem::path& p) { return ReadFile(p); }

TEST(RunExperimentTest, ByteIdenticalAcrossRepeatsAndWorkerCounts) {
  for (Algorithm a : {Algorithm::kMfpbt, Algorithm::kPbt, Algorithm::kPbtBt}) {
    TempDir dir("determinism");
    const ExperimentConfig c = SmallConfig(a);
    RunExperiment(c, 9, ToDir(dir.path() / "a", 1));
    RunExperiment(c, 9, ToDir(dir.path() / "b", 1));
    RunExperiment(c, 9, ToDir(dir.path() / "c", 3));
    for (const char* file : {"metrics.csv", "events.jsonl", "config.json"}) {
      const std::string a_text = Slurp(dir.path() / "a" / file);
      EXPECT_EQ(a_text, Slurp(dir.path() / "b" / file)) << file;
      EXPECT_EQ(a_text, Slurp(dir.path() / "c" / file)) << file;
    }
  }
}

TEST(RunExperimentTest, WritesExperimentDirectory) {
  TempDir dir("layout");
  const ExperimentResult r = RunExperiment(SmallConfig(), 4, ToDir(dir.path()));
  for (const char* file : {"config.json", "metrics.csv", "events.jsonl", "result.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / file)) << file;
  }
  const LoadedRun loaded = LoadRun(dir.path());
  EXPECT_EQ(loaded.seed, 4u);
  EXPECT_EQ(loaded.metrics, r.metrics);
  EXPECT_EQ(loaded.events, r.events);
  const auto result = nlohmann::json::parse(Slurp(dir.path() / "result.json"));
  EXPECT_EQ(result["status"], "completed");
  EXPECT_EQ(result["rounds_completed"], 10);
  EXPECT_EQ(result["best_curve"].get<std::vector<double>>(), r.BestCurve());
}

TEST(RunExperimentTest, ResumeMatchesUninterruptedRun) {
  for (Algorithm a : {Algorithm::kMfpbt, Algorithm::kPbtBt}) {
    TempDir dir("resume");
    ExperimentConfig c = SmallConfig(a);
    c.checkpoints = true;
    RunExperiment(c, 5, ToDir(dir.path() / "full"));

    RunOptions partial = ToDir(dir.path() / "split");
    partial.stop_after_round = 4;
    const ExperimentResult first = RunExperiment(c, 5, partial);
    EXPECT_EQ(first.rounds_completed, 4);
    // Continue to round 6, then drop the newest checkpoint so the final resume
    // has to discard logged rounds its checkpoint does not cover.
    partial.stop_after_round = 6;
    partial.resume = true;
    RunExperiment(c, 5, partial);
    std::filesystem::remove(CheckpointPath(dir.path() / "split", 6));

    RunOptions resume = ToDir(dir.path() / "split");
    resume.resume = true;
    const ExperimentResult resumed = RunExperiment(c, 5, resume);
    EXPECT_EQ(resumed.rounds_completed, 10);
    for (const char* file : {"metrics.csv", "events.jsonl"}) {
      EXPECT_EQ(Slurp(dir.path() / "full" / file), Slurp(dir.path() / "split" / file))
          << AlgorithmName(a) << " " << file;
    }
  }
}

TEST(RunExperimentTest, NonFiniteFitnessAbortsWithFlushedLogs) {
  ExperimentConfig c = SmallConfig(Algorithm::kRs);
  c.trainable = QuadraticParams{};
  c.search_space = HyperparamSpace({{"lr", 100.0, 1000.0}});
  c.total_steps = 200 * c.t_ready;
  TempDir dir("abort");
  try {
    RunExperiment(c, 1, ToDir(dir.path()));
    FAIL() << "expected a run error";
  } catch (const RunError& e) {
    EXPECT_GT(e.round(), 1);
    EXPECT_GE(e.agent_id(), 0);
    const LoadedRun partial = LoadRun(dir.path());
    EXPECT_EQ(static_cast<int>(partial.metrics.size()), 8 * (e.round() - 1));
    const auto result = nlohmann::json::parse(Slurp(dir.path() / "result.json"));
    EXPECT_EQ(result["status"], "aborted");
    EXPECT_EQ(result["rounds_completed"], e.round() - 1);
  }
}

TEST(EvaluateAllTest, SingleRepeatOnDeterministicTrainable) {
  ExperimentConfig c = SmallConfig(Algorithm::kRs);
  c.trainable = QuadraticParams{};
  c.search_space = HyperparamSpace({{"lr", 1e-3, 1e-1}});
  const StreamFactory streams(1);
  std::vector<std::unique_ptr<Trainable>> trainables;
  Population pop = InitPopulation(c, streams, trainables);
  EvaluateAll(trainables, pop, 1, streams, 1, WorkerPool(2));
  for (const AgentState& a : pop.agents()) {
    Rng rng(0);
    EXPECT_EQ(*a.snapshot_fitness, trainables[static_cast<std::size_t>(a.id)]->Evaluate(1, rng));
  }
}

TEST(EvaluateAllTest, UsesEachAgentsEvalStream) {
  const ExperimentConfig c = SmallConfig();
  const StreamFactory streams(8);
  std::vector<std::unique_ptr<Trainable>> trainables;
  Population pop = InitPopulation(c, streams, trainables);
  EvaluateAll(trainables, pop, 512, streams, 3, WorkerPool(1));
  for (const AgentState& a : pop.agents()) {
    Rng rng = streams.Stream(a.id, StreamKind::kEval, 3);
    double sum = 0.0;
    for (int k = 0; k < 512; ++k) {
      sum += trainables[static_cast<std::size_t>(a.id)]->EvaluateDraw(rng);
    }
    EXPECT_NEAR(*a.snapshot_fitness, sum / 512, 1e-12);
  }
}

TEST(RunExperimentTest, VarianceModeKeepsHyperparamMultiset) {
  ExperimentConfig c = FindPreset("mfpbt-variance")->config;
  c.search_space = HyperparamSpace({{"lr", 1e-4, 1e-2}});
  c.total_steps = 60 * c.t_ready;
  const ExperimentResult r = RunExperiment(c, 3);
  std::map<int, std::multiset<HyperparamVector>> per_round;
  for (const MetricRow& row : r.metrics) per_round[row.round].insert(row.hyperparams);
  for (const auto& [round, set] : per_round) EXPECT_EQ(set, per_round[1]) << round;
  EXPECT_FALSE(r.events.empty());
}

}  // namespace
}  // namespace mfpbt
