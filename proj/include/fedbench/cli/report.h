// Copyright 2026 The FedBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDBENCH_CLI_REPORT_H_
#define FEDBENCH_CLI_REPORT_H_

#include <filesystem>
#include <string>
#include <vector>

#include "fedbench/cli/runner.h"
#include "fedbench/stats/bayes_ttest.h"
#include "json.hpp"

namespace fedbench::cli {

inline constexpr double kDefaultAccuracyRope = 0.01;
inline constexpr double kConvergenceRope = 10.0;

struct RunSet {
  std::string label;  // directory name
  nlohmann::json workload;
  std::string metric;
  bool higher_is_better = true;
  std::vector<SummaryRow> rows;  // successful repetitions only
};

// Reads summary.csv, config.json and meta.json from a run directory.
RunSet LoadRunSet(const std::filesystem::path& dir);

struct PairComparison {
  std::string a;
  std::string b;
  std::string measure;  // "final_metric" or "convergence_rounds"
  double rope = 0.0;
  std::size_t pairs = 0;
  // Probabilities that A is better, that they are equivalent, that B is
  // better, oriented by whether larger values are better for the measure.
  double p_a = 0.0;
  double p_equal = 0.0;
  double p_b = 0.0;
};

// Per-seed paired comparison of every pair of run sets. Throws
// std::invalid_argument when fewer than two sets are given or their
// workloads differ.
std::vector<PairComparison> CompareRunSets(const std::vector<RunSet>& sets,
                                           double metric_rope,
                                           double rho = 0.0);

// Markdown: a mean ± std table, then the comparison table.
std::string RenderReport(const std::vector<RunSet>& sets,
                         const std::vector<PairComparison>& comparisons);

}  // namespace fedbench::cli

#endif  // FEDBENCH_CLI_REPORT_H_
