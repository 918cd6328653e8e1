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

#include "mfpbt/storage.h"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mfpbt {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string MetricsHeader(const HyperparamSpace& space) {
  std::string header = "round,agent_id,subpop_id,fitness";
  for (const auto& e : space.entries()) header += "," + e.name;
  return header;
}

std::string FormatMetricRow(const MetricRow& row) {
  std::string line =
      fmt::format("{},{},{},{}", row.round, row.agent_id, row.subpop_id, row.fitness);
  for (double v : row.hyperparams.values()) line += fmt::format(",{}", v);
  return line;
}

MetricRow ParseMetricRow(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(cell);
  if (cells.size() < 5) throw std::runtime_error("malformed metrics row: " + line);
  auto to_int = [&](const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::runtime_error("malformed metrics row: " + line);
    }
    return v;
  };
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::runtime_error("malformed metrics row: " + line);
    return v;
  };
  MetricRow row;
  row.round = to_int(cells[0]);
  row.agent_id = to_int(cells[1]);
  row.subpop_id = to_int(cells[2]);
  row.fitness = to_double(cells[3]);
  std::vector<double> h;
  for (std::size_t i = 4; i < cells.size(); ++i) h.push_back(to_double(cells[i]));
  row.hyperparams = HyperparamVector(std::move(h));
  return row;
}

std::string CheckpointPath(const fs::path& dir, int round) {
  return (dir / "checkpoints" / fmt::format("round_{:06d}.json", round)).string();
}

void WriteCheckpoint(const fs::path& dir, const Checkpoint& checkpoint) {
  fs::create_directories(dir / "checkpoints");
  ordered_json j;
  j["round"] = checkpoint.round;
  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < checkpoint.payloads.size(); ++i) {
    agents.push_back({{"id", i},
                      {"payload", checkpoint.payloads[i]},
                      {"hyperparams", checkpoint.hyperparams[i].values()}});
  }
  j["agents"] = agents;
  ordered_json archive = ordered_json::array();
  for (const Elite& e : checkpoint.archive) {
    archive.push_back({{"origin", e.origin},
                       {"round", e.round},
                       {"fitness", e.fitness},
                       {"payload", e.payload},
                       {"hyperparams", e.hyperparams.values()}});
  }
  j["archive"] = archive;
  // Write-then-rename so a crash never leaves a torn checkpoint behind.
  const fs::path final_path = CheckpointPath(dir, checkpoint.round);
  const fs::path tmp_path = final_path.string() + ".tmp";
  {
    std::ofstream out(tmp_path);
    out << j.dump() << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp_path.string());
  }
  fs::rename(tmp_path, final_path);
}

Checkpoint ReadCheckpoint(const fs::path& file) {
  const auto j = ordered_json::parse(ReadFile(file));
  Checkpoint c;
  c.round = j.at("round").get<int>();
  for (const auto& a : j.at("agents")) {
    c.payloads.push_back(a.at("payload").get<Payload>());
    c.hyperparams.emplace_back(a.at("hyperparams").get<std::vector<double>>());
  }
  for (const auto& e : j.at("archive")) {
    c.archive.push_back({e.at("payload").get<Payload>(),
                         HyperparamVector(e.at("hyperparams").get<std::vector<double>>()),
                         e.at("fitness").get<double>(), e.at("origin").get<int>(),
                         e.at("round").get<int>()});
  }
  return c;
}

std::optional<int> LatestCheckpointRound(const fs::path& dir) {
  const fs::path cdir = dir / "checkpoints";
  if (!fs::is_directory(cdir)) return std::nullopt;
  std::optional<int> latest;
  for (const auto& entry : fs::directory_iterator(cdir)) {
    const std::string name = entry.path().filename().string();
    int round = 0;
    if (std::sscanf(name.c_str(), "round_%d.json", &round) == 1 &&
        entry.path().extension() == ".json") {
      if (!latest || round > *latest) latest = round;
    }
  }
  return latest;
}

std::string ReadFile(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

LoadedRun LoadRun(const fs::path& dir) {
  LoadedRun run;
  run.dir = dir;
  run.config = ParseConfig(ReadFile(dir / "config.json"));
  // The runner echoes the config with `seeds` narrowed to the run's seed.
  run.seed = run.config.seeds.front();

  std::istringstream metrics(ReadFile(dir / "metrics.csv"));
  std::string line;
  std::getline(metrics, line);
  if (line != MetricsHeader(run.config.search_space)) {
    throw std::runtime_error(dir.string() + ": metrics.csv header does not match config");
  }
  while (std::getline(metrics, line)) {
    if (!line.empty()) run.metrics.push_back(ParseMetricRow(line));
  }
  std::istringstream events(ReadFile(dir / "events.jsonl"));
  while (std::getline(events, line)) {
    if (!line.empty()) run.events.push_back(EventFromJsonLine(line));
  }
  return run;
}

}  // namespace mfpbt
