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

#ifndef FEDBENCH_CLI_RUNNER_H_
#define FEDBENCH_CLI_RUNNER_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fedbench/cli/config.h"
#include "fedbench/fl/engine.h"
#include "json.hpp"

namespace fedbench::cli {

inline constexpr std::string_view kRoundFormat = "fedbench-rounds/1";
inline constexpr std::string_view kSummaryFormat = "fedbench-summary/1";
inline constexpr std::string_view kLedgerFormat = "fedbench-ledger/1";
inline constexpr std::string_view kPrivacyFormat = "fedbench-privacy/1";

// Summary CSV header, in column order.
const std::vector<std::string>& SummaryColumns();
// Ledger CSV header: one row per (round, actor).
const std::vector<std::string>& LedgerColumns();

struct SummaryRow {
  std::string preset;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double final_metric = 0.0;
  // Converged: first round at the fourth reduction. Capped: the cap.
  std::optional<std::size_t> convergence_rounds;
  bool converged = false;
  double throughput = 0.0;
  double overhead = 0.0;
  double uplink_ratio = 1.0;
  std::optional<double> eps_spent;
  std::size_t rounds = 0;
};

SummaryRow MakeSummaryRow(const ExperimentConfig& config, std::uint64_t seed,
                          const fl::ExperimentResult& result);

nlohmann::json RoundRecord(const fl::RoundResult& round);

struct RunReport {
  std::filesystem::path dir;
  std::vector<SummaryRow> rows;
  bool all_ok = true;
};

// Writes into config.output_dir: config.json, run_<seed>.jsonl,
// ledger_<seed>.csv, privacy_<seed>.csv (DP only) and summary.csv with one
// row per repetition plus an aggregate row. A failing repetition is
// recorded with status "error" and does not stop the others.
RunReport RunExperimentConfig(const ExperimentConfig& config,
                              std::ostream* log = nullptr);

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> ReadSummaryCsv(std::istream& in);

}  // namespace fedbench::cli

#endif  // FEDBENCH_CLI_RUNNER_H_
