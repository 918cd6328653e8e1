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

#include <algorithm>
#include <cmath>
#include <set>

namespace mfpbt {

HyperparamSpace::HyperparamSpace(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const Entry& e : entries_) {
    if (e.name.empty()) {
      throw ConfigError("search_space", "hyperparameter name is empty");
    }
    if (!names.insert(e.name).second) {
      throw ConfigError("search_space", "duplicate hyperparameter '" + e.name + "'");
    }
    if (!(e.low > 0.0) || !(e.low <= e.high) || !std::isfinite(e.high)) {
      throw ConfigError("search_space",
                        "range of '" + e.name + "' must satisfy 0 < low <= high");
    }
  }
}

std::optional<std::size_t> HyperparamSpace::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

HyperparamVector::HyperparamVector(std::vector<double> values)
    : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("hyperparameter values must be positive and finite");
    }
  }
}

HyperparamVector SampleHyperparams(const HyperparamSpace& space, Rng& rng) {
  std::vector<double> values;
  values.reserve(space.size());
  for (const auto& e : space.entries()) {
    if (e.low == e.high) {
      // Still consume a draw so stream positions do not depend on the range.
      rng.Uniform();
      values.push_back(e.low);
      continue;
    }
    const double u = rng.Uniform(std::log(e.low), std::log(e.high));
    values.push_back(std::clamp(std::exp(u), e.low, e.high));
  }
  return HyperparamVector(std::move(values));
}

void ValidatePartition(int population_size, int num_subpops) {
  if (num_subpops < 1) {
    throw ConfigError("num_subpops", "must be at least 1");
  }
  if (population_size < 1 || population_size % num_subpops != 0) {
    throw ConfigError("population_size", "must be divisible by num_subpops");
  }
  const int n = population_size / num_subpops;
  if (n % 4 != 0) {
    throw ConfigError("population_size",
                      "sub-population size " + std::to_string(n) +
                          " is not a multiple of 4");
  }
}

Population::Population(std::vector<AgentState> agents, int num_subpops)
    : agents_(std::move(agents)), num_subpops_(num_subpops) {
  ValidatePartition(static_cast<int>(agents_.size()), num_subpops);
  const int n = subpop_size();
  for (int i = 0; i < size(); ++i) {
    if (agents_[i].id != i) {
      throw std::invalid_argument("agent ids must be 0..N-1 in order");
    }
    if (agents_[i].subpop != i / n) {
      throw std::invalid_argument("agent " + std::to_string(i) +
                                  " is in the wrong sub-population");
    }
  }
}

std::vector<AgentId> Population::Members(int subpop) const {
  const int n = subpop_size();
  std::vector<AgentId> ids(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) ids[k] = subpop * n + k;
  return ids;
}

std::vector<std::pair<AgentId, double>> Population::Fitnesses(
    std::span<const AgentId> ids) const {
  std::vector<std::pair<AgentId, double>> out;
  out.reserve(ids.size());
  for (AgentId id : ids) {
    const auto& f = agent(id).snapshot_fitness;
    if (!f) {
      throw std::invalid_argument("agent " + std::to_string(id) +
                                  " has no snapshot fitness");
    }
    out.emplace_back(id, *f);
  }
  return out;
}

std::vector<AgentId> RankDescending(
    std::span<const std::pair<AgentId, double>> fitnesses) {
  if (fitnesses.empty()) throw std::invalid_argument("empty population");
  std::vector<std::pair<AgentId, double>> sorted(fitnesses.begin(), fitnesses.end());
  for (const auto& [id, f] : sorted) {
    if (!std::isfinite(f)) throw std::invalid_argument("invalid fitness");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<AgentId> ids;
  ids.reserve(sorted.size());
  for (const auto& [id, f] : sorted) ids.push_back(id);
  return ids;
}

Brackets ComputeBrackets(std::span<const AgentId> ranked) {
  const std::size_t n = ranked.size();
  if (n == 0 || n % 4 != 0) {
    throw ConfigError("population_size",
                      "sub-population size " + std::to_string(n) +
                          " is not a multiple of 4");
  }
  const std::size_t q = n / 4;
  auto slice = [&](std::size_t k) {
    return std::vector<AgentId>(ranked.begin() + k * q, ranked.begin() + (k + 1) * q);
  };
  return Brackets{slice(0), slice(1), slice(2), slice(3)};
}

}  // namespace mfpbt
