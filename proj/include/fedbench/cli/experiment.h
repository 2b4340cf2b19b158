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

#ifndef FEDBENCH_CLI_EXPERIMENT_H_
#define FEDBENCH_CLI_EXPERIMENT_H_

#include <cstdint>

#include "fedbench/cli/config.h"
#include "fedbench/data/dataset.h"
#include "fedbench/fl/engine.h"
#include "fedbench/splitnn/vertical_trainer.h"

namespace fedbench::cli {

data::Dataset LoadWorkload(const WorkloadConfig& workload);

// Widths {d, hidden..., out} with the head implied by the task.
models::MlpSpec ResolveModel(const ExperimentConfig& config,
                             const data::Dataset& ds);

stats::Metric ResolveMetric(const ExperimentConfig& config,
                            const models::MlpSpec& model);

struct HorizontalSetup {
  fl::RunSettings settings;
  fl::FederatedData data;
  data::PartitionSpec partition;  // empty for combined mode
};

// Partitions the training split with `seed`. Combined and solo baselines
// run without secure aggregation, which needs two or more parties.
HorizontalSetup BuildHorizontal(const ExperimentConfig& config,
                                std::uint64_t seed);

struct VerticalSetup {
  splitnn::VerticalSettings settings;
  splitnn::VerticalData data;
  data::AlignedDataset aligned;
};

// Column-splits the workload into party tables, drops rows from party B
// down to `overlap`, aligns them with zero padding and splits the result.
VerticalSetup BuildVertical(const ExperimentConfig& config, std::uint64_t seed);

// One repetition with the given seed.
fl::ExperimentResult RunOnce(const ExperimentConfig& config, std::uint64_t seed,
                             const fl::RoundObserver& observer = {});

}  // namespace fedbench::cli

#endif  // FEDBENCH_CLI_EXPERIMENT_H_
