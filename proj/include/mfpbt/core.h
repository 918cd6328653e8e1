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

#ifndef MFPBT_CORE_H_
#define MFPBT_CORE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mfpbt/random.h"

namespace mfpbt {

using AgentId = int;

// Opaque trainable state (network weights in the general case).
using Payload = std::vector<double>;

// Raised for invalid experiment configuration. `field` names the offending
// configuration key so callers can report it in machine-readable form.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Named positive hyperparameters with log-uniform initial sampling ranges.
class HyperparamSpace {
 public:
  struct Entry {
    std::string name;
    double low = 0.0;
    double high = 0.0;

    bool operator==(const Entry&) const = default;
  };

  HyperparamSpace() = default;
  // Throws ConfigError unless 0 < low <= high and names are unique.
  explicit HyperparamSpace(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::optional<std::size_t> IndexOf(std::string_view name) const;

  bool operator==(const HyperparamSpace&) const = default;

 private:
  std::vector<Entry> entries_;
};

// Strictly positive hyperparameter values aligned with a HyperparamSpace.
class HyperparamVector {
 public:
  HyperparamVector() = default;
  // Throws std::invalid_argument if any value is not strictly positive.
  explicit HyperparamVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  auto operator<=>(const HyperparamVector&) const = default;

 private:
  std::vector<double> values_;
};

// Draws each value as exp(u) with u uniform on [ln low, ln high].
HyperparamVector SampleHyperparams(const HyperparamSpace& space, Rng& rng);

struct AgentState {
  AgentId id = 0;
  int subpop = 0;
  Payload payload;
  HyperparamVector hyperparams;
  // Fitness of record for the current round. Written once per ranking pass.
  std::optional<double> snapshot_fitness;
};

// N agents split into M equal sub-populations; agent ids 0..n-1 belong to
// sub-population 0, n..2n-1 to sub-population 1, and so on.
class Population {
 public:
  Population() = default;
  // Throws ConfigError if the partition is invalid (n must be a multiple of 4).
  Population(std::vector<AgentState> agents, int num_subpops);

  int size() const { return static_cast<int>(agents_.size()); }
  int num_subpops() const { return num_subpops_; }
  int subpop_size() const { return size() / num_subpops_; }

  AgentState& agent(AgentId id) { return agents_.at(static_cast<std::size_t>(id)); }
  const AgentState& agent(AgentId id) const {
    return agents_.at(static_cast<std::size_t>(id));
  }
  std::vector<AgentState>& agents() { return agents_; }
  const std::vector<AgentState>& agents() const { return agents_; }

  // Agent ids of sub-population `subpop`, ascending.
  std::vector<AgentId> Members(int subpop) const;

  // (id, snapshot fitness) for the given ids. Throws std::invalid_argument if
  // any agent lacks a snapshot fitness.
  std::vector<std::pair<AgentId, double>> Fitnesses(
      std::span<const AgentId> ids) const;

 private:
  std::vector<AgentState> agents_;
  int num_subpops_ = 1;
};

// Validates N = M * n with n a positive multiple of 4.
void ValidatePartition(int population_size, int num_subpops);

// Fitness quartiles of one sub-population, best first within each bracket.
struct Brackets {
  std::vector<AgentId> winners;         // top quarter
  std::vector<AgentId> survivors;       // second quarter
  std::vector<AgentId> migration_open;  // third quarter
  std::vector<AgentId> losers;          // bottom quarter
};

// Sorts by fitness descending, ties by ascending id. Throws
// std::invalid_argument("empty population") or ("invalid fitness").
std::vector<AgentId> RankDescending(
    std::span<const std::pair<AgentId, double>> fitnesses);

// Splits a ranked list into quarters. Throws ConfigError if the length is not
// a positive multiple of 4.
Brackets ComputeBrackets(std::span<const AgentId> ranked);

}  // namespace mfpbt

#endif  // MFPBT_CORE_H_
