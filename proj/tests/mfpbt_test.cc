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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.h"
#include "oracles.h"

namespace mfpbt {
namespace {

using testing::MakeContext;
using testing::MakePopulation;
using testing::SigmaSpace;

std::vector<EvolutionEvent> MigrateSubpop(Population& pop, int subpop,
                                          const MfpbtConfig& config, int round = 1) {
  static const StreamFactory streams(1);
  static const HyperparamSpace space = SigmaSpace();
  return Migrate(pop, subpop, RankSubpop(pop, subpop), BuildExternalPool(pop, subpop),
                 config, MakeContext(round, streams, space));
}

TEST(SubpopDueTest, GatingArithmetic) {
  const std::vector<int> deltas{1, 10, 25, 50};
  const auto due = [&](int round) {
    std::vector<int> out;
    for (int d : deltas) {
      if (SubpopDue(round, d)) out.push_back(d);
    }
    return out;
  };
  EXPECT_EQ(due(30), (std::vector<int>{1, 10}));
  EXPECT_EQ(due(50), deltas);
  EXPECT_EQ(due(1), (std::vector<int>{1}));
}

TEST(ValidateDeltasTest, Rules) {
  EXPECT_NO_THROW(ValidateDeltas(std::vector<int>{1, 10, 25, 50}));
  EXPECT_THROW(ValidateDeltas(std::vector<int>{1, 10, 10}), ConfigError);
  EXPECT_THROW(ValidateDeltas(std::vector<int>{2, 10}), ConfigError);
  EXPECT_THROW(ValidateDeltas(std::vector<int>{}), ConfigError);
  try {
    ValidateDeltas(std::vector<int>{1, 10, 10});
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "deltas");
  }
}

TEST(BuildExternalPoolTest, OtherSubpopSortedDescending) {
  const Population pop = MakePopulation({9, 9, 9, 9, 3, 5, 2, 4}, 2);
  const auto pool = BuildExternalPool(pop, 0);
  std::vector<double> f;
  for (const PoolEntry& e : pool) f.push_back(e.fitness);
  EXPECT_EQ(f, (std::vector<double>{5, 4, 3, 2}));
  EXPECT_EQ(pool.front(), (PoolEntry{5, 1, 5.0}));
}

TEST(BuildExternalPoolTest, SingleSubpopIsEmpty) {
  const Population pop = MakePopulation({1, 2, 3, 4}, 1);
  EXPECT_TRUE(BuildExternalPool(pop, 0).empty());
}

TEST(BuildExternalPoolTest, NeverContainsOwnSubpop) {
  Rng rng(6);
  for (int instance = 0; instance < 500; ++instance) {
    const int m = 2 + static_cast<int>(rng.NextU64() % 3);
    std::vector<double> f;
    for (int k = 0; k < 4 * m; ++k) f.push_back(std::floor(rng.Uniform() * 4));
    const Population pop = MakePopulation(f, m);
    const int i = static_cast<int>(rng.NextU64() % static_cast<std::uint64_t>(m));
    const auto pool = BuildExternalPool(pop, i);
    ASSERT_EQ(static_cast<int>(pool.size()), 4 * (m - 1));
    for (std::size_t k = 0; k < pool.size(); ++k) {
      ASSERT_NE(pool[k].subpop, i);
      if (k > 0) {
        ASSERT_TRUE(pool[k - 1].fitness > pool[k].fitness ||
                    (pool[k - 1].fitness == pool[k].fitness && pool[k - 1].id < pool[k].id));
      }
    }
  }
}

TEST(MigrateTest, SteadySubpopImportsWeightsOnly) {
  // Sub-population 0 has delta 1, sub-population 1 delta 50.
  Population pop = MakePopulation(
      {5, 2, -5, -6, -7, -8, -9, -10, 10, 9, 8, 7, 3, 1, 0, -1}, 2);
  const auto events = MigrateSubpop(pop, 1, {{1, 50}, false, false});
  ASSERT_EQ(events.size(), 2u);
  EXPECT_EQ(events[0].target, 12);
  EXPECT_EQ(events[0].source, 0);
  EXPECT_EQ(events[0].kind, EventKind::kMigrationWeightsOnly);
  EXPECT_EQ(events[0].hyperparams_source, 8);
  EXPECT_EQ(events[1].target, 13);
  EXPECT_EQ(events[1].source, 1);
  EXPECT_EQ(events[1].kind, EventKind::kMigrationWeightsOnly);
  EXPECT_EQ(pop.agent(12).payload, Payload{0.0});
  EXPECT_EQ(pop.agent(12).hyperparams, pop.agent(8).hyperparams);
  EXPECT_EQ(pop.agent(13).payload, Payload{1.0});
  EXPECT_EQ(pop.agent(13).hyperparams, pop.agent(8).hyperparams);
}

TEST(MigrateTest, DynamicSubpopTakesFullTransfer) {
  Population pop = MakePopulation({9, 8, 1, 0, 4, 3, 2, 1}, 2);
  const auto events = MigrateSubpop(pop, 0, {{1, 50}, false, false});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].target, 2);
  EXPECT_EQ(events[0].source, 4);
  EXPECT_EQ(events[0].kind, EventKind::kMigrationFull);
  EXPECT_EQ(events[0].hyperparams_source, 4);
  EXPECT_EQ(pop.agent(2).payload, Payload{4.0});
  EXPECT_EQ(pop.agent(2).hyperparams, HyperparamVector({5.0}));
}

TEST(MigrateTest, FitterAgentKeptAndCursorStays) {
  Population pop = MakePopulation(
      {20, 19, 18, 17, 9, 4, -1, -2, 5, 1, 0, 0, -3, -4, -5, -6}, 2);
  const auto events = MigrateSubpop(pop, 0, {{1, 50}, false, false});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].target, 5);
  EXPECT_EQ(events[0].source, 8);
  EXPECT_EQ(pop.agent(4).payload, Payload{4.0});
}

TEST(MigrateTest, SymmetricAlwaysFull) {
  Population pop = MakePopulation(
      {5, 2, -5, -6, -7, -8, -9, -10, 10, 9, 8, 7, 3, 1, 0, -1}, 2);
  const auto events = MigrateSubpop(pop, 1, {{1, 50}, true, false});
  ASSERT_EQ(events.size(), 2u);
  for (const auto& e : events) {
    EXPECT_EQ(e.kind, EventKind::kMigrationFull);
    EXPECT_EQ(e.hyperparams_source, e.source);
  }
  EXPECT_EQ(pop.agent(12).hyperparams, HyperparamVector({1.0}));
}

TEST(MigrateTest, VarianceModeKeepsTargetHyperparams) {
  Population pop = MakePopulation({9, 8, 1, 0, 4, 3, 2, 1}, 2);
  const auto events = MigrateSubpop(pop, 0, {{1, 50}, false, true});
  ASSERT_EQ(events.size(), 1u);
  EXPECT_EQ(events[0].kind, EventKind::kMigrationWeightsOnly);
  EXPECT_EQ(pop.agent(2).payload, Payload{4.0});
  EXPECT_EQ(pop.agent(2).hyperparams, HyperparamVector({3.0}));
}

TEST(MigrateTest, EmptyPoolKeepsEveryone) {
  Population pop = MakePopulation({1, 2, 3, 4}, 1);
  EXPECT_TRUE(MigrateSubpop(pop, 0, {{1}, false, false}).empty());
}

TEST(MigrateTest, MatchesHandSimulation) {
  Rng rng(404);
  for (int instance = 0; instance < 300; ++instance) {
    const int m = 2 + static_cast<int>(rng.NextU64() % 3);
    const int n = 4 * (1 + static_cast<int>(rng.NextU64() % 2));
    std::vector<double> f;
    std::vector<int> subpop_of;
    for (int k = 0; k < n * m; ++k) {
      f.push_back(instance % 3 == 0 ? std::floor(rng.Uniform() * 3) : rng.Normal());
      subpop_of.push_back(k / n);
    }
    std::vector<int> deltas{1};
    for (int s = 1; s < m; ++s) deltas.push_back(deltas.back() + 1 + rng.NextU64() % 20);
    const int i = static_cast<int>(rng.NextU64() % static_cast<std::uint64_t>(m));
    const bool symmetric = rng.Coin();
    Population pop = MakePopulation(f, m);
    const auto events = MigrateSubpop(pop, i, {deltas, symmetric, false});
    std::vector<oracle::Transfer> got;
    for (const auto& e : events) {
      got.push_back({e.target, *e.source, e.kind == EventKind::kMigrationFull,
                     *e.hyperparams_source});
    }
    ASSERT_EQ(got, oracle::Migration(f, subpop_of, deltas, i, symmetric));
  }
}

TEST(MfpbtRoundTest, OnlyDueSubpopsEvolve) {
  const StreamFactory streams(2);
  const HyperparamSpace space = SigmaSpace();
  Rng rng(1);
  std::vector<double> f;
  for (int k = 0; k < 32; ++k) f.push_back(rng.Normal());
  const MfpbtConfig config{{1, 10, 25, 50}, false, false};

  Population pop7 = MakePopulation(f, 4);
  const auto events7 = MfpbtRound(pop7, config, MakeContext(7, streams, space));
  int clones = 0;
  int migrations = 0;
  for (const auto& e : events7) {
    EXPECT_EQ(e.subpop_id, 0);
    clones += e.kind == EventKind::kPerturbedClone;
    migrations += e.kind == EventKind::kMigrationFull ||
                  e.kind == EventKind::kMigrationWeightsOnly;
  }
  EXPECT_EQ(clones, 2);
  EXPECT_LE(migrations, 2);

  Population pop50 = MakePopulation(f, 4);
  const auto events50 = MfpbtRound(pop50, config, MakeContext(50, streams, space));
  std::vector<int> order;
  for (const auto& e : events50) {
    if (order.empty() || order.back() != e.subpop_id) order.push_back(e.subpop_id);
  }
  EXPECT_EQ(order, (std::vector<int>{0, 1, 2, 3}));
}

TEST(MfpbtRoundTest, SingleSubpopMatchesPbt) {
  const HyperparamSpace space = SigmaSpace();
  Rng rng(12);
  for (int instance = 0; instance < 50; ++instance) {
    std::vector<double> f;
    for (int k = 0; k < 16; ++k) f.push_back(rng.Normal());
    const StreamFactory streams(rng.NextU64());
    Population a = MakePopulation(f, 1);
    Population b = MakePopulation(f, 1);
    const auto ctx = MakeContext(instance + 1, streams, space);
    EXPECT_EQ(MfpbtRound(a, {{1}, false, false}, ctx), PbtRound(b, 1, ctx));
  }
}

// Runs random barrier rounds and checks the migration properties.
TEST(MfpbtRoundTest, MigrationProperties) {
  const HyperparamSpace space = SigmaSpace();
  Rng rng(99);
  for (int instance = 0; instance < 200; ++instance) {
    const std::vector<int> deltas{1, 2, 3, 6};
    std::vector<double> f;
    for (int k = 0; k < 32; ++k) f.push_back(rng.Normal());
    Population pop = MakePopulation(f, 4);
    const Population before = pop;
    const StreamFactory streams(rng.NextU64());
    const int round = 6;
    const auto events = MfpbtRound(pop, {deltas, false, false},
                                   MakeContext(round, streams, space));
    std::map<int, std::set<AgentId>> sources;
    std::map<int, int> count;
    for (const auto& e : events) {
      if (e.kind != EventKind::kMigrationFull && e.kind != EventKind::kMigrationWeightsOnly) {
        continue;
      }
      const int contender_delta = deltas[static_cast<std::size_t>(*e.source / 8)];
      const int own_delta = deltas[static_cast<std::size_t>(e.subpop_id)];
      if (e.kind == EventKind::kMigrationWeightsOnly) {
        ASSERT_LT(contender_delta, own_delta);
      } else {
        ASSERT_GT(contender_delta, own_delta);
      }
      ASSERT_TRUE(sources[e.subpop_id].insert(*e.source).second);
      ++count[e.subpop_id];
      ASSERT_EQ(e.target / 8, e.subpop_id);
    }
    for (const auto& [subpop, c] : count) ASSERT_LE(c, 2);
    ASSERT_EQ(pop.size(), before.size());
  }
}

TEST(MfpbtRoundTest, WeightsOnlyTargetsCarryBestWinnerHyperparams) {
  const HyperparamSpace space = SigmaSpace();
  Rng rng(5);
  int checked = 0;
  for (int instance = 0; instance < 200; ++instance) {
    std::vector<double> f;
    for (int k = 0; k < 16; ++k) f.push_back(rng.Normal() + (k >= 8 ? -1.0 : 0.0));
    Population pop = MakePopulation(f, 2);
    const StreamFactory streams(rng.NextU64());
    const auto events =
        MfpbtRound(pop, {{1, 2}, false, false}, MakeContext(2, streams, space));
    for (const auto& e : events) {
      if (e.kind != EventKind::kMigrationWeightsOnly) continue;
      const Brackets b = ComputeBrackets(RankDescending(
          std::vector<std::pair<AgentId, double>>{{8, f[8]},   {9, f[9]},   {10, f[10]},
                                                  {11, f[11]}, {12, f[12]}, {13, f[13]},
                                                  {14, f[14]}, {15, f[15]}}));
      ASSERT_EQ(e.hyperparams_source, b.winners.front());
      ASSERT_EQ(e.hyperparams_after, pop.agent(b.winners.front()).hyperparams);
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(MfpbtRoundTest, VarianceModePreservesHyperparamMultiset) {
  const HyperparamSpace space = SigmaSpace();
  Rng rng(3);
  std::vector<double> f;
  for (int k = 0; k < 32; ++k) f.push_back(rng.Normal());
  Population pop = MakePopulation(f, 4);
  auto multiset = [&] {
    std::multiset<HyperparamVector> s;
    for (const auto& a : pop.agents()) s.insert(a.hyperparams);
    return s;
  };
  const auto initial = multiset();
  const StreamFactory streams(3);
  auto ctx = MakeContext(1, streams, space);
  for (int round = 1; round <= 100; ++round) {
    for (auto& a : pop.agents()) a.snapshot_fitness = rng.Normal();
    ctx.round = round;
    MfpbtRound(pop, {{1, 2, 5, 10}, false, true}, ctx);
  }
  EXPECT_EQ(multiset(), initial);
}

}  // namespace
}  // namespace mfpbt
