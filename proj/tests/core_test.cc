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

#include "mfpbt/core.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "fixtures.h"
#include "oracles.h"

namespace mfpbt {
namespace {

TEST(HyperparamSpaceTest, RejectsInvalidRanges) {
  EXPECT_THROW(HyperparamSpace({{"lr", 0.0, 1.0}}), ConfigError);
  EXPECT_THROW(HyperparamSpace({{"lr", 2.0, 1.0}}), ConfigError);
  EXPECT_THROW(HyperparamSpace({{"lr", 1e-3, 1e-2}, {"lr", 1e-3, 1e-2}}), ConfigError);
  EXPECT_NO_THROW(HyperparamSpace({{"lr", 1e-4, 1e-4}}));
}

TEST(HyperparamSpaceTest, IndexOf) {
  const HyperparamSpace space({{"lr", 1e-5, 1e-3}, {"entropy", 1e-3, 1e-1}});
  EXPECT_EQ(space.IndexOf("entropy"), 1u);
  EXPECT_FALSE(space.IndexOf("gamma").has_value());
}

TEST(HyperparamVectorTest, RequiresPositiveValues) {
  EXPECT_THROW(HyperparamVector({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(HyperparamVector({-1.0}), std::invalid_argument);
  EXPECT_THROW(HyperparamVector({std::numeric_limits<double>::infinity()}),
               std::invalid_argument);
}

TEST(SampleHyperparamsTest, WithinBounds) {
  const HyperparamSpace space({{"lr", 1e-5, 1e-3}});
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const double v = SampleHyperparams(space, rng)[0];
    EXPECT_GE(v, 1e-5);
    EXPECT_LE(v, 1e-3);
  }
}

TEST(SampleHyperparamsTest, DegenerateRangeIsExact) {
  const HyperparamSpace space({{"lr", 1e-4, 1e-4}});
  Rng rng(1);
  EXPECT_EQ(SampleHyperparams(space, rng)[0], 1e-4);
}

TEST(SampleHyperparamsTest, DeterministicPerSeed) {
  const HyperparamSpace space({{"lr", 1e-5, 1e-3}, {"entropy", 1e-3, 1e-1}});
  Rng a = SeedHierarchy(5, 0, StreamKind::kInit);
  Rng b = SeedHierarchy(5, 0, StreamKind::kInit);
  EXPECT_EQ(SampleHyperparams(space, a), SampleHyperparams(space, b));
}

TEST(SampleHyperparamsTest, LogValuesAreUniform) {
  const HyperparamSpace space({{"lr", 1e-5, 1e-3}, {"entropy", 1e-3, 1e-1}});
  const int n = 10000;
  std::array<std::array<int, 10>, 2> bins{};
  Rng rng(77);
  for (int s = 0; s < n; ++s) {
    const HyperparamVector h = SampleHyperparams(space, rng);
    for (std::size_t e = 0; e < 2; ++e) {
      const auto& entry = space.entries()[e];
      ASSERT_GE(h[e], entry.low);
      ASSERT_LE(h[e], entry.high);
      const double t = (std::log(h[e]) - std::log(entry.low)) /
                       (std::log(entry.high) - std::log(entry.low));
      ++bins[e][std::min<std::size_t>(9, static_cast<std::size_t>(t * 10))];
    }
  }
  for (const auto& entry_bins : bins) {
    for (int count : entry_bins) {
      EXPECT_GE(count, n * 5 / 100);
      EXPECT_LE(count, n * 15 / 100);
    }
  }
}

TEST(RankDescendingTest, SortsByFitness) {
  const std::vector<std::pair<AgentId, double>> f{{0, 3.0}, {1, 1.0}, {2, 2.0}};
  EXPECT_EQ(RankDescending(f), (std::vector<AgentId>{0, 2, 1}));
}

TEST(RankDescendingTest, TiesByAscendingId) {
  const std::vector<std::pair<AgentId, double>> f{{1, 1.0}, {0, 1.0}};
  EXPECT_EQ(RankDescending(f), (std::vector<AgentId>{0, 1}));
}

TEST(RankDescendingTest, Errors) {
  try {
    RankDescending({});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "empty population");
  }
  const std::vector<std::pair<AgentId, double>> f{
      {0, 1.0}, {1, std::numeric_limits<double>::quiet_NaN()}};
  try {
    RankDescending(f);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "invalid fitness");
  }
}

TEST(RankDescendingTest, MatchesSelectionSortOracle) {
  Rng rng(123);
  for (int instance = 0; instance < 1000; ++instance) {
    const int size = 1 + static_cast<int>(rng.NextU64() % 40);
    std::vector<std::pair<AgentId, double>> f;
    for (int k = 0; k < size; ++k) {
      // Coarse values force ties.
      const double v = instance % 2 == 0 ? std::floor(rng.Uniform() * 5) : rng.Normal();
      f.push_back({k * 3 + 1, v});
    }
    std::vector<std::pair<AgentId, double>> shuffled = f;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
      std::swap(shuffled[k - 1], shuffled[rng.NextU64() % k]);
    }
    const std::vector<AgentId> ranked = RankDescending(shuffled);
    ASSERT_EQ(ranked, oracle::Rank(f));
    std::vector<AgentId> sorted_ids = ranked;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    for (int k = 0; k < size; ++k) ASSERT_EQ(sorted_ids[k], k * 3 + 1);
  }
}

TEST(ComputeBracketsTest, EightAgents) {
  const std::vector<AgentId> ranked{10, 11, 12, 13, 14, 15, 16, 17};
  const Brackets b = ComputeBrackets(ranked);
  EXPECT_EQ(b.winners, (std::vector<AgentId>{10, 11}));
  EXPECT_EQ(b.survivors, (std::vector<AgentId>{12, 13}));
  EXPECT_EQ(b.migration_open, (std::vector<AgentId>{14, 15}));
  EXPECT_EQ(b.losers, (std::vector<AgentId>{16, 17}));
}

TEST(ComputeBracketsTest, FourAgents) {
  const std::vector<AgentId> ranked{3, 1, 0, 2};
  const Brackets b = ComputeBrackets(ranked);
  EXPECT_EQ(b.winners, (std::vector<AgentId>{3}));
  EXPECT_EQ(b.survivors, (std::vector<AgentId>{1}));
  EXPECT_EQ(b.migration_open, (std::vector<AgentId>{0}));
  EXPECT_EQ(b.losers, (std::vector<AgentId>{2}));
}

TEST(ComputeBracketsTest, RejectsSizesNotMultipleOfFour) {
  const std::vector<AgentId> six{0, 1, 2, 3, 4, 5};
  EXPECT_THROW(ComputeBrackets(six), ConfigError);
  EXPECT_THROW(ComputeBrackets({}), ConfigError);
}

TEST(ComputeBracketsTest, PartitionProperty) {
  Rng rng(31);
  for (int instance = 0; instance < 500; ++instance) {
    const int n = 4 * (1 + static_cast<int>(rng.NextU64() % 8));
    std::vector<std::pair<AgentId, double>> f;
    for (int k = 0; k < n; ++k) f.push_back({k, rng.Normal()});
    const std::vector<AgentId> ranked = RankDescending(f);
    const Brackets b = ComputeBrackets(ranked);
    std::set<AgentId> all;
    for (const auto* part : {&b.winners, &b.survivors, &b.migration_open, &b.losers}) {
      ASSERT_EQ(static_cast<int>(part->size()), n / 4);
      all.insert(part->begin(), part->end());
    }
    ASSERT_EQ(static_cast<int>(all.size()), n);
    const auto fit = [&](AgentId id) { return f[static_cast<std::size_t>(id)].second; };
    const std::vector<const std::vector<AgentId>*> order{&b.winners, &b.survivors,
                                                         &b.migration_open, &b.losers};
    for (std::size_t q = 0; q + 1 < order.size(); ++q) {
      double lowest = fit(order[q]->front());
      for (AgentId id : *order[q]) lowest = std::min(lowest, fit(id));
      for (AgentId id : *order[q + 1]) ASSERT_GE(lowest, fit(id));
    }
  }
}

TEST(PopulationTest, ValidatesPartition) {
  EXPECT_THROW(ValidatePartition(12, 2), ConfigError);
  EXPECT_THROW(ValidatePartition(10, 3), ConfigError);
  EXPECT_THROW(ValidatePartition(0, 1), ConfigError);
  EXPECT_NO_THROW(ValidatePartition(32, 4));
  EXPECT_NO_THROW(ValidatePartition(4, 1));
}

TEST(PopulationTest, MembersAndFitnesses) {
  const Population pop = testing::MakePopulation({1, 2, 3, 4, 5, 6, 7, 8}, 2);
  EXPECT_EQ(pop.Members(1), (std::vector<AgentId>{4, 5, 6, 7}));
  EXPECT_EQ(pop.subpop_size(), 4);
  const std::vector<AgentId> ids{0, 7};
  const auto f = pop.Fitnesses(ids);
  EXPECT_EQ(f[1], (std::pair<AgentId, double>{7, 8.0}));
}

TEST(PopulationTest, RejectsInconsistentLayout) {
  std::vector<AgentState> agents(4);
  for (int k = 0; k < 4; ++k) agents[k].id = k;
  agents[3].subpop = 1;
  EXPECT_THROW(Population(agents, 1), std::invalid_argument);
}

}  // namespace
}  // namespace mfpbt
