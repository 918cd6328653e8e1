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

#ifndef MFPBT_TESTS_FIXTURES_H_
#define MFPBT_TESTS_FIXTURES_H_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include "mfpbt/config.h"
#include "mfpbt/core.h"
#include "mfpbt/pbt.h"
#include "mfpbt/random.h"

namespace mfpbt::testing {

// Population whose agent k carries payload {k}, hyperparameters {k + 1} and
// snapshot fitness fitness[k].
inline Population MakePopulation(const std::vector<double>& fitness, int num_subpops) {
  std::vector<AgentState> agents;
  const int n = static_cast<int>(fitness.size()) / num_subpops;
  for (int k = 0; k < static_cast<int>(fitness.size()); ++k) {
    AgentState a;
    a.id = k;
    a.subpop = k / n;
    a.payload = {static_cast<double>(k)};
    a.hyperparams = HyperparamVector({static_cast<double>(k + 1)});
    a.snapshot_fitness = fitness[static_cast<std::size_t>(k)];
    agents.push_back(std::move(a));
  }
  return Population(std::move(agents), num_subpops);
}

inline HyperparamSpace SigmaSpace(double low = 0.05, double high = 5.0) {
  return HyperparamSpace({{"sigma", low, high}});
}

inline EvolutionContext MakeContext(int round, const StreamFactory& streams,
                                    const HyperparamSpace& space) {
  EvolutionContext ctx;
  ctx.round = round;
  ctx.streams = &streams;
  ctx.space = &space;
  return ctx;
}

// Small two-basin experiment: N = 8, M = 2, deltas (1, 2), 10 rounds of 5 steps.
inline ExperimentConfig SmallConfig(Algorithm algorithm = Algorithm::kMfpbt) {
  ExperimentConfig c;
  c.name = "small";
  c.algorithm = algorithm;
  c.population_size = 8;
  c.num_subpops = algorithm == Algorithm::kMfpbt || algorithm == Algorithm::kRs ? 2 : 1;
  c.deltas = c.num_subpops == 2 ? std::vector<int>{1, 2} : std::vector<int>{1};
  c.t_ready = 5;
  c.total_steps = 50;
  c.eval_repeats = 4;
  c.search_space = SigmaSpace();
  if (algorithm == Algorithm::kPbtBt) c.backtrack = BacktrackConfig{4, 3};
  return c;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mfpbt_" + name + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace mfpbt::testing

#endif  // MFPBT_TESTS_FIXTURES_H_
