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

#include "mfpbt/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mfpbt {

namespace {

std::vector<double> Sorted(std::span<const double> values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + " of empty list");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double BestAgentFitness(std::span<const double> snapshot) {
  if (snapshot.empty()) throw std::invalid_argument("best fitness of empty snapshot");
  return *std::max_element(snapshot.begin(), snapshot.end());
}

double Iqm(std::span<const double> values) {
  const std::vector<double> v = Sorted(values, "iqm");
  const std::size_t trim = v.size() / 4;
  double sum = 0.0;
  for (std::size_t i = trim; i < v.size() - trim; ++i) sum += v[i];
  return sum / static_cast<double>(v.size() - 2 * trim);
}

std::pair<double, double> IqrBounds(std::span<const double> values) {
  const std::vector<double> v = Sorted(values, "iqr");
  const std::size_t trim = v.size() / 4;
  return {v[trim], v[v.size() - 1 - trim]};
}

AggregateCurve Aggregate(std::span<const std::vector<double>> per_seed) {
  if (per_seed.empty()) throw std::invalid_argument("no curves to aggregate");
  const std::size_t rounds = per_seed.front().size();
  for (const auto& curve : per_seed) {
    if (curve.size() != rounds) {
      throw std::invalid_argument(fmt::format(
          "mismatched round grids: {} vs {} rounds", rounds, curve.size()));
    }
  }
  AggregateCurve out;
  out.seed_count = static_cast<int>(per_seed.size());
  std::vector<double> column(per_seed.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t s = 0; s < per_seed.size(); ++s) column[s] = per_seed[s][r];
    const auto [low, high] = IqrBounds(column);
    out.rounds.push_back(static_cast<int>(r) + 1);
    out.iqm.push_back(Iqm(column));
    out.iqr_low.push_back(low);
    out.iqr_high.push_back(high);
  }
  return out;
}

RunCurves CurvesFromMetrics(std::string algorithm, std::uint64_t seed,
                            std::span<const MetricRow> metrics) {
  RunCurves c{std::move(algorithm), seed, {}, {}};
  int rounds = 0;
  for (const MetricRow& row : metrics) rounds = std::max(rounds, row.round);
  c.best.assign(static_cast<std::size_t>(rounds), -std::numeric_limits<double>::infinity());
  c.mean.assign(static_cast<std::size_t>(rounds), 0.0);
  std::vector<int> count(static_cast<std::size_t>(rounds), 0);
  for (const MetricRow& row : metrics) {
    const auto r = static_cast<std::size_t>(row.round - 1);
    c.best[r] = std::max(c.best[r], row.fitness);
    c.mean[r] += row.fitness;
    ++count[r];
  }
  for (std::size_t r = 0; r < count.size(); ++r) {
    if (count[r] == 0) {
      throw std::invalid_argument(fmt::format("no metrics for round {}", r + 1));
    }
    c.mean[r] /= count[r];
  }
  return c;
}

ComparisonReport CompareReport(std::span<const RunCurves> runs, int every) {
  if (runs.empty()) throw std::invalid_argument("no runs to report");
  if (every < 1) throw std::invalid_argument("report stride must be at least 1");
  ComparisonReport report;
  std::vector<std::vector<std::vector<double>>> grouped;
  for (const RunCurves& run : runs) {
    const auto it =
        std::find(report.algorithms.begin(), report.algorithms.end(), run.algorithm);
    const auto index = static_cast<std::size_t>(it - report.algorithms.begin());
    if (it == report.algorithms.end()) {
      report.algorithms.push_back(run.algorithm);
      grouped.emplace_back();
    }
    grouped[index].push_back(run.best);
  }
  const std::size_t rounds = runs.front().best.size();
  for (const auto& group : grouped) {
    report.curves.push_back(Aggregate(group));
    if (report.curves.back().rounds.size() != rounds) {
      throw std::invalid_argument("mismatched round grids across algorithms");
    }
  }
  for (std::size_t r = 0; r < rounds; ++r) {
    const bool last = r + 1 == rounds;
    if ((r + 1) % static_cast<std::size_t>(every) != 0 && !last) continue;
    std::size_t best = 0;
    for (std::size_t a = 1; a < report.curves.size(); ++a) {
      if (report.curves[a].iqm[r] > report.curves[best].iqm[r]) best = a;
    }
    const double threshold = report.curves[best].iqr_low[r];
    for (std::size_t a = 0; a < report.curves.size(); ++a) {
      const AggregateCurve& c = report.curves[a];
      report.rows.push_back({report.algorithms[a], static_cast<int>(r) + 1, c.iqm[r],
                             c.iqr_low[r], c.iqr_high[r], c.iqm[r] >= threshold});
    }
  }
  return report;
}

void WriteReportCsv(std::ostream& out, const ComparisonReport& report) {
  out << "algorithm,round,iqm,iqr_low,iqr_high,within_best_iqr\n";
  for (const ReportRow& row : report.rows) {
    out << fmt::format("{},{},{},{},{},{}\n", row.algorithm, row.round, row.iqm,
                       row.iqr_low, row.iqr_high, row.within_best_iqr ? 1 : 0);
  }
}

void WriteCurvesCsv(std::ostream& out, std::span<const RunCurves> runs) {
  out << "algorithm,seed,round,best_fitness,mean_fitness\n";
  for (const RunCurves& run : runs) {
    for (std::size_t r = 0; r < run.best.size(); ++r) {
      out << fmt::format("{},{},{},{},{}\n", run.algorithm, run.seed, r + 1, run.best[r],
                         run.mean[r]);
    }
  }
}

}  // namespace mfpbt
