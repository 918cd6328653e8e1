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

#ifndef MFPBT_CALIBRATION_H_
#define MFPBT_CALIBRATION_H_

#include <cstdint>

#include "mfpbt/trainable.h"

namespace mfpbt {

// Fraction of independent two-basin hill climbers, started at x = 0 with a
// fixed `sigma`, whose objective exceeds 1.5 after `steps` steps. Walker k uses
// the train stream of agent k under `master_seed`.
double TwoBasinEscapeRate(double sigma, int steps, int walkers, std::uint64_t master_seed);

// Mean over `populations` independent populations of `size` seed-lottery
// agents of the ratio max drift / median drift. Agent k of population p draws
// its drift from the init stream of agent k under master seed `master_seed + p`.
double DriftSpreadRatio(const SeedLotteryParams& params, int size, int populations,
                        std::uint64_t master_seed);

}  // namespace mfpbt

#endif  // MFPBT_CALIBRATION_H_
