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

#include "mfpbt/calibration.h"

#include <algorithm>
#include <vector>

#include "mfpbt/random.h"

namespace mfpbt {

double TwoBasinEscapeRate(double sigma, int steps, int walkers,
                          std::uint64_t master_seed) {
  const StreamFactory streams(master_seed);
  int escaped = 0;
  for (int k = 0; k < walkers; ++k) {
    Rng rng = streams.Stream(k, StreamKind::kTrain);
    double x = 0.0;
    for (int step = 0; step < steps; ++step) x = TwoBasinTrainStep(x, sigma, rng);
    if (TwoBasinObjective(x) > 1.5) ++escaped;
  }
  return static_cast<double>(escaped) / walkers;
}

double DriftSpreadRatio(const SeedLotteryParams& params, int size, int populations,
                        std::uint64_t master_seed) {
  double total = 0.0;
  std::vector<double> drifts(static_cast<std::size_t>(size));
  for (int p = 0; p < populations; ++p) {
    const StreamFactory streams(master_seed + static_cast<std::uint64_t>(p));
    for (int k = 0; k < size; ++k) {
      SeedLotteryTrainable agent(params);
      Rng rng = streams.Stream(k, StreamKind::kInit);
      agent.Init(rng, HyperparamVector{});
      drifts[static_cast<std::size_t>(k)] = agent.state().drift;
    }
    std::sort(drifts.begin(), drifts.end());
    const std::size_t mid = drifts.size() / 2;
    const double median = drifts.size() % 2 == 1
                              ? drifts[mid]
                              : 0.5 * (drifts[mid - 1] + drifts[mid]);
    total += drifts.back() / median;
  }
  return total / populations;
}

}  // namespace mfpbt
