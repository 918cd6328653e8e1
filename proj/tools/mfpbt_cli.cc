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

// Command-line entry point: run experiments, aggregate reports, reconstruct
// schedules, validate configs and list presets.

#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mfpbt/config.h"
#include "mfpbt/lineage.h"
#include "mfpbt/report.h"
#include "mfpbt/runner.h"
#include "mfpbt/storage.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMismatch = 3;

int ReportError(const std::string& type, const std::string& message,
                const std::string& field = "", int code = kExitRuntime) {
  ordered_json j;
  j["error"]["type"] = type;
  if (!field.empty()) j["error"]["field"] = field;
  j["error"]["message"] = message;
  std::cerr << j.dump() << "\n";
  return code;
}

std::optional<std::string> Env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

mfpbt::ExperimentConfig LoadConfig(const std::string& config_path,
                                   const std::string& preset) {
  if (!preset.empty()) {
    const mfpbt::Preset* p = mfpbt::FindPreset(preset);
    if (p == nullptr) throw mfpbt::ConfigError("preset", "unknown preset '" + preset + "'");
    return p->config;
  }
  return mfpbt::ParseConfig(mfpbt::ReadFile(config_path));
}

struct RunArgs {
  std::string config_path;
  std::string preset;
  std::vector<std::uint64_t> seeds;
  std::string out;
  int workers = 0;
  bool checkpoints = false;
  bool resume = false;
};

int CmdRun(const RunArgs& args) {
  mfpbt::ExperimentConfig config = LoadConfig(args.config_path, args.preset);
  if (args.checkpoints || args.resume) config.checkpoints = true;
  mfpbt::Validate(config);
  const std::vector<std::uint64_t> seeds = args.seeds.empty() ? config.seeds : args.seeds;

  int workers = args.workers;
  if (workers <= 0) workers = Env("MFPBT_WORKERS") ? std::stoi(*Env("MFPBT_WORKERS")) : 1;
  fs::path base = args.out;
  if (base.empty()) {
    base = fs::path(Env("MFPBT_OUTPUT_ROOT").value_or("runs")) / config.name;
  }

  ordered_json summary = ordered_json::array();
  for (std::uint64_t seed : seeds) {
    const fs::path dir =
        (seeds.size() == 1 && !args.out.empty()) ? base : base / fmt::format("seed_{}", seed);
    mfpbt::RunOptions options;
    options.workers = workers;
    options.output_dir = dir.string();
    options.resume = args.resume;
    const mfpbt::ExperimentResult result = mfpbt::RunExperiment(config, seed, options);
    const auto best = result.BestCurve();
    summary.push_back({{"seed", seed},
                       {"out", dir.string()},
                       {"rounds", result.rounds_completed},
                       {"events", result.events.size()},
                       {"best_final_fitness", best.empty() ? 0.0 : best.back()}});
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int CmdReport(const std::vector<std::string>& dirs, const std::string& out,
              const std::string& curves_out, int every) {
  std::vector<mfpbt::RunCurves> runs;
  for (const std::string& dir : dirs) {
    const mfpbt::LoadedRun run = mfpbt::LoadRun(dir);
    runs.push_back(mfpbt::CurvesFromMetrics(run.config.name, run.seed, run.metrics));
  }
  const mfpbt::ComparisonReport report = mfpbt::CompareReport(runs, every);
  std::ofstream report_file(out);
  mfpbt::WriteReportCsv(report_file, report);
  if (!curves_out.empty()) {
    std::ofstream curves_file(curves_out);
    mfpbt::WriteCurvesCsv(curves_file, runs);
  }
  if (!report_file) throw std::runtime_error("failed writing " + out);
  ordered_json j;
  j["report"] = out;
  j["runs"] = runs.size();
  j["algorithms"] = report.algorithms;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int CmdLineage(const std::string& dir, const std::string& agent_arg, int round,
               std::string out, bool verify) {
  const mfpbt::LoadedRun run = mfpbt::LoadRun(dir);
  const mfpbt::Lineage lineage(mfpbt::MakeLineageLog(run.metrics, run.events));
  if (round <= 0) round = lineage.last_round();
  mfpbt::AgentId agent = 0;
  if (agent_arg == "best") {
    agent = mfpbt::BestAgentAt(run.metrics, round);
  } else {
    try {
      agent = std::stoi(agent_arg);
    } catch (const std::exception&) {
      return ReportError("usage", "--agent must be 'best' or an agent id", "agent",
                         kExitConfig);
    }
  }
  const auto segments = lineage.Reconstruct(agent, round);
  if (out.empty()) out = (fs::path(dir) / "schedule.csv").string();
  std::ofstream file(out);
  mfpbt::WriteScheduleCsv(file, segments, run.config.search_space);
  if (!file) throw std::runtime_error("failed writing " + out);

  ordered_json j;
  j["agent"] = agent;
  j["round"] = round;
  j["segments"] = segments.size();
  j["schedule"] = out;
  if (verify) {
    const auto trace = mfpbt::ReplaySchedule(segments, run.config, run.seed);
    const auto divergence = mfpbt::FirstDivergence(trace, run.metrics);
    j["replay_matches"] = !divergence.has_value();
    std::cout << j.dump(2) << "\n";
    if (divergence) {
      return ReportError("replay_mismatch", divergence->Describe(), "", kExitMismatch);
    }
    return 0;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int CmdValidate(const std::vector<std::string>& files) {
  for (const std::string& file : files) {
    mfpbt::ParseConfig(mfpbt::ReadFile(file));
    std::cout << file << ": ok\n";
  }
  return 0;
}

int CmdPresets(const std::string& show) {
  if (!show.empty()) {
    const mfpbt::Preset* p = mfpbt::FindPreset(show);
    if (p == nullptr) {
      return ReportError("config", "unknown preset '" + show + "'", "preset", kExitConfig);
    }
    std::cout << mfpbt::SerializeConfig(p->config);
    return 0;
  }
  for (const mfpbt::Preset& p : mfpbt::Presets()) {
    std::cout << fmt::format("{:<24} {}\n", p.name, p.description);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population-based hyperparameter schedule optimisation"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run an experiment for one or more seeds");
  auto* source = run->add_option_group("source");
  source->add_option("--config", run_args.config_path, "Experiment config JSON")
      ->check(CLI::ExistingFile);
  source->add_option("--preset", run_args.preset, "Named preset");
  source->require_option(1);
  run->add_option("--seed", run_args.seeds, "Master seed(s); defaults to the config's");
  run->add_option("--out", run_args.out, "Output directory");
  run->add_option("--workers", run_args.workers, "Worker threads (env MFPBT_WORKERS)");
  run->add_flag("--checkpoints", run_args.checkpoints, "Write per-round checkpoints");
  run->add_flag("--resume", run_args.resume, "Resume from the latest checkpoint");

  std::vector<std::string> report_dirs;
  std::string report_out = "report.csv";
  std::string curves_out;
  int every = 1;
  auto* report = app.add_subcommand("report", "Aggregate runs into report.csv");
  report->add_option("runs", report_dirs, "Run directories")->required()->check(
      CLI::ExistingDirectory);
  report->add_option("--out", report_out, "Report CSV path");
  report->add_option("--curves", curves_out, "Optional long-format curves CSV path");
  report->add_option("--every", every, "Report every k-th round")->check(
      CLI::PositiveNumber);

  std::string lineage_dir;
  std::string agent = "best";
  int round = 0;
  std::string schedule_out;
  bool verify = false;
  auto* lineage = app.add_subcommand("lineage", "Reconstruct an agent's schedule");
  lineage->add_option("run", lineage_dir, "Run directory")->required()->check(
      CLI::ExistingDirectory);
  lineage->add_option("--agent", agent, "'best' or an agent id");
  lineage->add_option("--round", round, "Query round (default: last)");
  lineage->add_option("--out", schedule_out, "Schedule CSV path (default: RUN/schedule.csv)");
  lineage->add_flag("--verify", verify, "Replay the schedule and compare to metrics");

  std::vector<std::string> validate_files;
  auto* validate = app.add_subcommand("validate", "Validate config files");
  validate->add_option("configs", validate_files, "Config JSON files")->required();

  std::string show;
  auto* presets = app.add_subcommand("presets", "List presets or print one");
  presets->add_option("--show", show, "Print the named preset's config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError("usage", e.what(), "", kExitConfig);
  }

  try {
    if (*run) return CmdRun(run_args);
    if (*report) return CmdReport(report_dirs, report_out, curves_out, every);
    if (*lineage) return CmdLineage(lineage_dir, agent, round, schedule_out, verify);
    if (*validate) return CmdValidate(validate_files);
    if (*presets) return CmdPresets(show);
  } catch (const mfpbt::ConfigError& e) {
    return ReportError("config", e.what(), e.field(), kExitConfig);
  } catch (const mfpbt::RunError& e) {
    return ReportError("runtime", e.what());
  } catch (const mfpbt::LineageError& e) {
    return ReportError("lineage", e.what());
  } catch (const std::exception& e) {
    return ReportError("runtime", e.what());
  }
  return 0;
}
