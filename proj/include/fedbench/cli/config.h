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

#ifndef FEDBENCH_CLI_CONFIG_H_
#define FEDBENCH_CLI_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fedbench/compression/compression.h"
#include "fedbench/data/csv.h"
#include "fedbench/data/partition.h"
#include "fedbench/data/synth.h"
#include "fedbench/data/vertical.h"
#include "fedbench/fl/engine.h"
#include "fedbench/models/mlp.h"
#include "fedbench/models/optimizer.h"
#include "fedbench/models/plateau_scheduler.h"
#include "fedbench/netsim/netsim.h"
#include "fedbench/privacy/privacy.h"
#include "fedbench/stats/metrics.h"
#include "json.hpp"

namespace fedbench::cli {

inline constexpr std::string_view kConfigFormat = "fedbench-config/1";

enum class Source { kSynth, kCsv };

struct WorkloadConfig {
  Source source = Source::kSynth;
  data::SynthSpec synth;
  std::string csv_path;
  data::CsvTask csv_task = data::CsvTask::kClassification;
  // Seed of the train/test/val split; fixed across repetitions.
  std::uint64_t split_seed = 0;
};

// federated: N clients. combined: one client holding all training data.
// solo: only client `solo_client` of the federated partition. vertical:
// SplitNN over column-split party features.
enum class SetupMode { kFederated, kCombined, kSolo, kVertical };

SetupMode ParseSetupMode(std::string_view name);
std::string_view ToString(SetupMode m);

struct VerticalConfig {
  std::vector<std::size_t> party_widths;
  std::vector<std::vector<std::size_t>> bottom_hidden;
  std::vector<std::size_t> cut_widths;
  std::vector<std::size_t> top_hidden;
  // Fraction of rows party B also holds; rows it lacks are zero-padded.
  double overlap = 1.0;
  data::LabelOwner label_owner = data::LabelOwner::kA;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200;
  // Baseline: one party holds every aligned column; per-layer widths are
  // the sums of the party widths.
  bool combine_parties = false;
};

struct ExperimentConfig {
  std::string name = "custom";
  WorkloadConfig workload;

  // Hidden widths; "auto" resolves to {2d, d/2}.
  std::optional<std::vector<std::size_t>> hidden;
  models::Activation activation = models::Activation::kRelu;
  std::optional<stats::Metric> metric;

  SetupMode mode = SetupMode::kFederated;
  std::size_t solo_client = 0;

  data::PartitionScheme scheme = data::PartitionScheme::kIid;
  double alpha = 1.0;
  std::size_t clients = 5;

  fl::AlgoConfig algo;
  models::OptimizerConfig optimizer;
  models::PlateauConfig plateau;
  bool schedule_on_loss = true;

  std::optional<privacy::DpConfig> dp;
  fl::SecureAggConfig secagg;
  compression::CompressionConfig compression;
  netsim::Channel channel;
  fl::CostModel cost;
  VerticalConfig vertical;

  std::size_t repetitions = 1;
  std::uint64_t base_seed = 1;
  std::string output_dir = "runs/custom";
  std::size_t workers = 1;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // every problem found, in document order
  bool ok() const { return config.has_value(); }
};

ParseOutcome ParseConfig(std::string_view text);
ParseOutcome ParseConfigJson(const nlohmann::json& doc);
// Throws std::invalid_argument with all errors joined by newlines.
ExperimentConfig ParseConfigOrThrow(std::string_view text);
ExperimentConfig LoadConfigFile(const std::string& path);

// Parses a standalone workload object (the "workload" section of a config).
// Throws std::invalid_argument listing every problem.
WorkloadConfig ParseWorkloadJson(const nlohmann::json& doc);

// Serializes every field; ParseConfigJson(ToJson(c)) reproduces c.
nlohmann::json ToJson(const ExperimentConfig& config);

// Cross-module checks; returns the violations (empty when valid).
std::vector<std::string> ValidateConfig(const ExperimentConfig& config);

}  // namespace fedbench::cli

#endif  // FEDBENCH_CLI_CONFIG_H_
