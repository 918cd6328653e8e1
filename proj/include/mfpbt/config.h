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

#ifndef MFPBT_CONFIG_H_
#define MFPBT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfpbt/baselines.h"
#include "mfpbt/core.h"
#include "mfpbt/mfpbt.h"
#include "mfpbt/trainable.h"

namespace mfpbt {

enum class Algorithm { kRs, kPbt, kMfpbt, kPbtBt };

const char* AlgorithmName(Algorithm algorithm);
Algorithm ParseAlgorithm(std::string_view name);

inline constexpr int kConfigVersion = 1;

struct ExperimentConfig {
  int version = kConfigVersion;
  // Label used to group runs in reports.
  std::string name = "custom";
  Algorithm algorithm = Algorithm::kMfpbt;
  int population_size = 32;
  int num_subpops = 4;
  // mfpbt/rs: one period per sub-population, 1 = d1 < d2 < ...
  // pbt/pbt_bt: a single evolution period (any value >= 1).
  std::vector<int> deltas{1, 10, 25, 50};
  std::int64_t t_ready = 50;
  std::int64_t total_steps = 50 * 1000;
  int eval_repeats = 16;
  HyperparamSpace search_space;
  bool variance_exploitation = false;
  bool symmetric_migration = false;
  bool clamp_hyperparams = false;
  std::vector<std::uint64_t> seeds{1};
  std::optional<BacktrackConfig> backtrack;
  TrainableSpec trainable = TwoBasinParams{};
  // Write per-round payload snapshots (needed for resuming).
  bool checkpoints = false;
  std::string output_dir;

  int num_rounds() const { return static_cast<int>(total_steps / t_ready); }
  MfpbtConfig mfpbt() const {
    return {deltas, symmetric_migration, variance_exploitation};
  }

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws ConfigError naming the first invalid field.
void Validate(const ExperimentConfig& config);

// Canonical JSON (fixed key order, 2-space indent, trailing newline).
std::string SerializeConfig(const ExperimentConfig& config);

// Strict parse: unknown keys, missing keys and wrong types throw ConfigError.
// The result is validated.
ExperimentConfig ParseConfig(std::string_view json_text);

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

const std::vector<Preset>& Presets();
// nullptr if unknown.
const Preset* FindPreset(std::string_view name);

}  // namespace mfpbt

#endif  // MFPBT_CONFIG_H_
