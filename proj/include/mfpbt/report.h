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

#ifndef MFPBT_REPORT_H_
#define MFPBT_REPORT_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfpbt/storage.h"

namespace mfpbt {

// Highest value of a round snapshot. Throws std::invalid_argument if empty.
double BestAgentFitness(std::span<const double> snapshot);

// Interquartile mean: sort, drop floor(k/4) values from each end, average the
// rest. Throws std::invalid_argument if empty.
double Iqm(std::span<const double> values);

// The lowest and highest values kept by the Iqm trim.
std::pair<double, double> IqrBounds(std::span<const double> values);

struct AggregateCurve {
  std::vector<int> rounds;
  std::vector<double> iqm;
  std::vector<double> iqr_low;
  std::vector<double> iqr_high;
  int seed_count = 0;
};

// Aggregates per-seed curves sampled on rounds 1..R. Throws
// std::invalid_argument on an empty set or mismatched lengths.
AggregateCurve Aggregate(std::span<const std::vector<double>> per_seed);

// Per-round curves of one run.
struct RunCurves {
  std::string algorithm;
  std::uint64_t seed = 0;
  std::vector<double> best;
  std::vector<double> mean;
};

RunCurves CurvesFromMetrics(std::string algorithm, std::uint64_t seed,
                            std::span<const MetricRow> metrics);

struct ReportRow {
  std::string algorithm;
  int round = 0;
  double iqm = 0.0;
  double iqr_low = 0.0;
  double iqr_high = 0.0;
  bool within_best_iqr = false;
};

struct ComparisonReport {
  // Algorithms in first-appearance order.
  std::vector<std::string> algorithms;
  std::vector<AggregateCurve> curves;
  // Grouped by round, then algorithm.
  std::vector<ReportRow> rows;
};

// Aggregates best-agent curves across seeds per algorithm and flags, at each
// reported round, the algorithms whose IQM reaches the lower IQR bound of the
// algorithm with the highest IQM. `every` selects rounds every, 2*every, ...,
// plus the final round. Throws std::invalid_argument on mismatched grids.
ComparisonReport CompareReport(std::span<const RunCurves> runs, int every = 1);

void WriteReportCsv(std::ostream& out, const ComparisonReport& report);
// Long format: algorithm,seed,round,best_fitness,mean_fitness.
void WriteCurvesCsv(std::ostream& out, std::span<const RunCurves> runs);

}  // namespace mfpbt

#endif  // MFPBT_REPORT_H_
