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

// Measures the calibration constants of the synthetic trainables.

#include <iostream>

#include "json.hpp"
#include "mfpbt/calibration.h"

int main() {
  nlohmann::ordered_json j;
  j["two_basin_escape_rate"] = {{"sigma", 5.0},
                                {"steps", 10000},
                                {"walkers", 100},
                                {"master_seed", 1},
                                {"value", mfpbt::TwoBasinEscapeRate(5.0, 10000, 100, 1)}};
  nlohmann::ordered_json sweep = nlohmann::ordered_json::object();
  for (double sigma : {0.05, 0.5, 1.0, 2.0, 5.0}) {
    sweep[std::to_string(sigma)] = mfpbt::TwoBasinEscapeRate(sigma, 50 * 400, 100, 1);
  }
  j["escape_rate_by_sigma_20000_steps"] = sweep;
  j["drift_spread_ratio"] = {
      {"size", 32},
      {"populations", 100},
      {"master_seed", 1},
      {"value", mfpbt::DriftSpreadRatio(mfpbt::SeedLotteryParams{}, 32, 100, 1)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}
