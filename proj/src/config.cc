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

#include "mfpbt/config.h"

#include <set>

#include "json.hpp"

namespace mfpbt {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::pair<Algorithm, const char*> kAlgorithmNames[] = {
    {Algorithm::kRs, "rs"},
    {Algorithm::kPbt, "pbt"},
    {Algorithm::kMfpbt, "mfpbt"},
    {Algorithm::kPbtBt, "pbt_bt"},
};

// Reads an object field by field and rejects keys nobody asked for.
class StrictObject {
 public:
  StrictObject(const ordered_json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "config" : path_, "must be an object");
  }

  template <typename T>
  T Get(const std::string& key) {
    seen_.insert(key);
    const std::string field = Field(key);
    if (!j_.contains(key)) throw ConfigError(field, "missing");
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(field, "has the wrong type");
    }
  }

  template <typename T>
  T Get(const std::string& key, T fallback) {
    if (!j_.contains(key)) {
      seen_.insert(key);
      return fallback;
    }
    return Get<T>(key);
  }

  const ordered_json& Raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(Field(key), "missing");
    return j_.at(key);
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  std::string Field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void RejectUnknown() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(Field(key), "unknown key");
    }
  }

 private:
  const ordered_json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ordered_json TrainableToJson(const TrainableSpec& spec) {
  ordered_json j;
  j["kind"] = TrainableKindName(spec);
  if (const auto* p = std::get_if<TwoBasinParams>(&spec)) {
    j["x0"] = p->x0;
    j["eval_noise"] = p->eval_noise;
    j["forget_prob"] = p->forget_prob;
    j["forget_scale"] = p->forget_scale;
  } else if (const auto* p = std::get_if<QuadraticParams>(&spec)) {
    j["curvature"] = p->curvature;
    j["theta0"] = p->theta0;
  } else if (const auto* p = std::get_if<SeedLotteryParams>(&spec)) {
    j["drift_median"] = p->drift_median;
    j["drift_log_sigma"] = p->drift_log_sigma;
    j["step_noise"] = p->step_noise;
  }
  return j;
}

TrainableSpec TrainableFromJson(const ordered_json& j) {
  StrictObject o(j, "trainable");
  const auto kind = o.Get<std::string>("kind");
  TrainableSpec spec;
  if (kind == "two_basin") {
    TwoBasinParams p;
    p.x0 = o.Get<double>("x0", p.x0);
    p.eval_noise = o.Get<double>("eval_noise", p.eval_noise);
    p.forget_prob = o.Get<double>("forget_prob", p.forget_prob);
    p.forget_scale = o.Get<double>("forget_scale", p.forget_scale);
    spec = p;
  } else if (kind == "quadratic_lr") {
    QuadraticParams p;
    p.curvature = o.Get<std::vector<double>>("curvature", p.curvature);
    p.theta0 = o.Get<std::vector<double>>("theta0", p.theta0);
    spec = p;
  } else if (kind == "seed_lottery") {
    SeedLotteryParams p;
    p.drift_median = o.Get<double>("drift_median", p.drift_median);
    p.drift_log_sigma = o.Get<double>("drift_log_sigma", p.drift_log_sigma);
    p.step_noise = o.Get<double>("step_noise", p.step_noise);
    spec = p;
  } else {
    throw ConfigError("trainable.kind", "unknown trainable '" + kind + "'");
  }
  o.RejectUnknown();
  return spec;
}

}  // namespace

const char* AlgorithmName(Algorithm algorithm) {
  for (const auto& [a, name] : kAlgorithmNames) {
    if (a == algorithm) return name;
  }
  return "unknown";
}

Algorithm ParseAlgorithm(std::string_view name) {
  for (const auto& [a, n] : kAlgorithmNames) {
    if (name == n) return a;
  }
  throw ConfigError("algorithm", "unknown algorithm '" + std::string(name) + "'");
}

void Validate(const ExperimentConfig& config) {
  if (config.version != kConfigVersion) {
    throw ConfigError("version", "unsupported version " + std::to_string(config.version));
  }
  ValidatePartition(config.population_size, config.num_subpops);
  switch (config.algorithm) {
    case Algorithm::kRs:
    case Algorithm::kMfpbt:
      if (config.deltas.size() != static_cast<std::size_t>(config.num_subpops)) {
        throw ConfigError("deltas", "need one delta per sub-population");
      }
      ValidateDeltas(config.deltas);
      break;
    case Algorithm::kPbt:
    case Algorithm::kPbtBt:
      if (config.num_subpops != 1) {
        throw ConfigError("num_subpops", "must be 1 for single-population PBT");
      }
      if (config.deltas.size() != 1 || config.deltas[0] < 1) {
        throw ConfigError("deltas", "PBT takes a single evolution period >= 1");
      }
      break;
  }
  if (config.algorithm == Algorithm::kPbtBt) {
    if (!config.backtrack) throw ConfigError("backtrack", "required for pbt_bt");
    if (config.backtrack->elites < 1) throw ConfigError("backtrack.elites", "must be >= 1");
    if (config.backtrack->period < 1) throw ConfigError("backtrack.period", "must be >= 1");
  } else if (config.backtrack) {
    throw ConfigError("backtrack", "only valid for pbt_bt");
  }
  if (config.t_ready < 1) throw ConfigError("t_ready", "must be >= 1");
  if (config.total_steps < config.t_ready || config.total_steps % config.t_ready != 0) {
    throw ConfigError("total_steps", "must be a positive multiple of t_ready");
  }
  if (config.eval_repeats < 1) throw ConfigError("eval_repeats", "must be >= 1");
  if (config.search_space.size() == 0) throw ConfigError("search_space", "must not be empty");
  if (config.seeds.empty()) throw ConfigError("seeds", "must not be empty");
  // Constructing the trainable checks that the space provides what it reads.
  MakeTrainable(config.trainable, config.search_space);
}

std::string SerializeConfig(const ExperimentConfig& config) {
  ordered_json j;
  j["version"] = config.version;
  j["name"] = config.name;
  j["algorithm"] = AlgorithmName(config.algorithm);
  j["population_size"] = config.population_size;
  j["num_subpops"] = config.num_subpops;
  j["deltas"] = config.deltas;
  j["t_ready"] = config.t_ready;
  j["total_steps"] = config.total_steps;
  j["eval_repeats"] = config.eval_repeats;
  ordered_json space = ordered_json::array();
  for (const auto& e : config.search_space.entries()) {
    ordered_json entry;
    entry["name"] = e.name;
    entry["low"] = e.low;
    entry["high"] = e.high;
    entry["scale"] = "log-uniform";
    space.push_back(entry);
  }
  j["search_space"] = space;
  j["variance_exploitation"] = config.variance_exploitation;
  j["symmetric_migration"] = config.symmetric_migration;
  j["clamp_hyperparams"] = config.clamp_hyperparams;
  j["seeds"] = config.seeds;
  if (config.backtrack) {
    j["backtrack"] = {{"elites", config.backtrack->elites},
                      {"period", config.backtrack->period}};
  } else {
    j["backtrack"] = nullptr;
  }
  j["trainable"] = TrainableToJson(config.trainable);
  j["checkpoints"] = config.checkpoints;
  j["output_dir"] = config.output_dir;
  return j.dump(2) + "\n";
}

ExperimentConfig ParseConfig(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  StrictObject o(j, "");
  ExperimentConfig c;
  c.version = o.Get<int>("version");
  if (c.version != kConfigVersion) {
    throw ConfigError("version", "unsupported version " + std::to_string(c.version));
  }
  c.name = o.Get<std::string>("name", c.name);
  c.algorithm = ParseAlgorithm(o.Get<std::string>("algorithm"));
  c.population_size = o.Get<int>("population_size");
  c.num_subpops = o.Get<int>("num_subpops");
  c.deltas = o.Get<std::vector<int>>("deltas");
  c.t_ready = o.Get<std::int64_t>("t_ready");
  c.total_steps = o.Get<std::int64_t>("total_steps");
  c.eval_repeats = o.Get<int>("eval_repeats", c.eval_repeats);

  const auto& space_json = o.Raw("search_space");
  if (!space_json.is_array()) throw ConfigError("search_space", "must be an array");
  std::vector<HyperparamSpace::Entry> entries;
  for (std::size_t i = 0; i < space_json.size(); ++i) {
    StrictObject e(space_json[i], "search_space[" + std::to_string(i) + "]");
    HyperparamSpace::Entry entry;
    entry.name = e.Get<std::string>("name");
    entry.low = e.Get<double>("low");
    entry.high = e.Get<double>("high");
    const auto scale = e.Get<std::string>("scale", "log-uniform");
    if (scale != "log-uniform") throw ConfigError(e.Field("scale"), "only log-uniform is supported");
    e.RejectUnknown();
    entries.push_back(std::move(entry));
  }
  c.search_space = HyperparamSpace(std::move(entries));

  c.variance_exploitation = o.Get<bool>("variance_exploitation", false);
  c.symmetric_migration = o.Get<bool>("symmetric_migration", false);
  c.clamp_hyperparams = o.Get<bool>("clamp_hyperparams", false);
  c.seeds = o.Get<std::vector<std::uint64_t>>("seeds", c.seeds);
  if (o.Has("backtrack") && !o.Raw("backtrack").is_null()) {
    StrictObject b(o.Raw("backtrack"), "backtrack");
    c.backtrack = BacktrackConfig{b.Get<int>("elites"), b.Get<int>("period")};
    b.RejectUnknown();
  } else {
    o.Get<std::nullptr_t>("backtrack", nullptr);
  }
  c.trainable = TrainableFromJson(o.Raw("trainable"));
  c.checkpoints = o.Get<bool>("checkpoints", false);
  c.output_dir = o.Get<std::string>("output_dir", "");
  o.RejectUnknown();
  Validate(c);
  return c;
}

namespace {

HyperparamSpace SigmaSpace() { return HyperparamSpace({{"sigma", 0.05, 5.0}}); }

ExperimentConfig TwoBasin(std::string name, Algorithm algorithm, int n_agents,
                          std::vector<int> deltas, int rounds) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.algorithm = algorithm;
  c.population_size = n_agents;
  c.num_subpops = static_cast<int>(deltas.size());
  c.deltas = std::move(deltas);
  c.t_ready = 50;
  c.total_steps = c.t_ready * rounds;
  c.eval_repeats = 16;
  c.search_space = SigmaSpace();
  c.trainable = TwoBasinParams{};
  return c;
}

ExperimentConfig Lottery(std::string name, Algorithm algorithm, std::vector<int> deltas,
                         int rounds) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.algorithm = algorithm;
  c.population_size = 32;
  c.num_subpops = static_cast<int>(deltas.size());
  c.deltas = std::move(deltas);
  c.t_ready = 10;
  c.total_steps = c.t_ready * rounds;
  c.eval_repeats = 1;
  // Fixed default hyperparameters; the lottery trainable ignores them.
  c.search_space = HyperparamSpace({{"lr", 3e-4, 3e-4}});
  c.variance_exploitation = algorithm != Algorithm::kRs;
  c.trainable = SeedLotteryParams{};
  return c;
}

std::vector<Preset> BuildPresets() {
  constexpr int kLong = 1200;   // rounds for the full-size presets
  constexpr int kBench = 400;   // rounds for the desk-scale benchmark
  const std::vector<int> kDefaultDeltas{1, 10, 25, 50};
  const std::vector<int> kBenchDeltas{1, 4, 8, 16};

  std::vector<Preset> p;
  p.push_back({"mfpbt-default", "N=32 in 4 sub-populations, deltas 1/10/25/50",
               TwoBasin("mfpbt-default", Algorithm::kMfpbt, 32, kDefaultDeltas, kLong)});
  {
    auto c = TwoBasin("mfpbt-symmetric", Algorithm::kMfpbt, 32, kDefaultDeltas, kLong);
    c.symmetric_migration = true;
    p.push_back({"mfpbt-symmetric", "mfpbt-default with symmetric (full) migration", c});
  }
  {
    // Geometric spread with t_ready scaled by 6.
    auto c = TwoBasin("mfpbt-geometric", Algorithm::kMfpbt, 32, {1, 2, 4, 8}, kLong / 6);
    c.t_ready *= 6;
    c.total_steps = c.t_ready * (kLong / 6);
    p.push_back({"mfpbt-geometric", "deltas 1/2/4/8 with a 6x longer t_ready", c});
  }
  for (int d : kDefaultDeltas) {
    const std::string name = "pbt-delta" + std::to_string(d);
    p.push_back({name, "single-population PBT, N=32, evolving every " +
                           std::to_string(d) + " rounds",
                 TwoBasin(name, Algorithm::kPbt, 32, {d}, kLong)});
  }
  p.push_back({"rs", "random search, N=32",
               TwoBasin("rs", Algorithm::kRs, 32, {1}, kLong)});
  {
    auto c = TwoBasin("pbt-bt", Algorithm::kPbtBt, 32, {1}, kLong);
    c.backtrack = BacktrackConfig{16, 50};
    p.push_back({"pbt-bt", "PBT with backtracking, N_e=16, every 50 rounds", c});
  }
  for (int n : {16, 64}) {
    const std::string mf = "mfpbt-pop" + std::to_string(n);
    p.push_back({mf, "mfpbt-default with N=" + std::to_string(n),
                 TwoBasin(mf, Algorithm::kMfpbt, n, kDefaultDeltas, kLong)});
  }
  for (int n : {16, 64, 80}) {
    const std::string name = "pbt-pop" + std::to_string(n);
    p.push_back({name, "pbt-delta1 with N=" + std::to_string(n),
                 TwoBasin(name, Algorithm::kPbt, n, {1}, kLong)});
  }

  p.push_back({"mfpbt-variance", "fixed hyperparameters, weight cloning only (seed lottery)",
               Lottery("mfpbt-variance", Algorithm::kMfpbt, kDefaultDeltas, 200)});
  p.push_back({"pbt-variance", "PBT with fixed hyperparameters (seed lottery)",
               Lottery("pbt-variance", Algorithm::kPbt, {1}, 200)});
  p.push_back({"rs-variance", "non-evolutive baseline (seed lottery)",
               Lottery("rs-variance", Algorithm::kRs, {1}, 200)});

  p.push_back({"bench-mfpbt", "two-basin benchmark: N=16, deltas 1/4/8/16",
               TwoBasin("bench-mfpbt", Algorithm::kMfpbt, 16, kBenchDeltas, kBench)});
  {
    auto c = TwoBasin("bench-mfpbt-symmetric", Algorithm::kMfpbt, 16, kBenchDeltas, kBench);
    c.symmetric_migration = true;
    p.push_back({"bench-mfpbt-symmetric", "bench-mfpbt with symmetric migration", c});
  }
  p.push_back({"bench-rs", "two-basin benchmark: random search, N=16",
               TwoBasin("bench-rs", Algorithm::kRs, 16, {1}, kBench)});
  for (int d : kBenchDeltas) {
    const std::string name = "bench-pbt-delta" + std::to_string(d);
    p.push_back({name, "two-basin benchmark: PBT, N=16, delta " + std::to_string(d),
                 TwoBasin(name, Algorithm::kPbt, 16, {d}, kBench)});
  }
  {
    auto c = TwoBasin("bench-pbt-bt", Algorithm::kPbtBt, 16, {1}, 200);
    c.backtrack = BacktrackConfig{8, 25};
    c.trainable = TwoBasinParams{.x0 = 0.0, .eval_noise = 0.4, .forget_prob = 0.01,
                                 .forget_scale = 3.0};
    p.push_back({"bench-pbt-bt", "PBT-BT on a two-basin variant with forgetting", c});
  }
  return p;
}

}  // namespace

const std::vector<Preset>& Presets() {
  static const std::vector<Preset> presets = BuildPresets();
  return presets;
}

const Preset* FindPreset(std::string_view name) {
  for (const Preset& p : Presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace mfpbt
