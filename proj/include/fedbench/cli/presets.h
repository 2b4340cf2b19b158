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

#ifndef FEDBENCH_CLI_PRESETS_H_
#define FEDBENCH_CLI_PRESETS_H_

#include <string>
#include <string_view>
#include <vector>

#include "fedbench/cli/config.h"

namespace fedbench::cli {

struct PresetInfo {
  std::string name;
  std::string summary;
};

// Catalog order: baseline, noniid-label, noniid-quantity, algorithms, smc,
// dp, compression, hybrid, vertical-baseline.
const std::vector<PresetInfo>& PresetCatalog();

// Throws std::invalid_argument for unknown names.
ExperimentConfig Preset(std::string_view name);

// The synthetic workload every horizontal preset shares.
WorkloadConfig DefaultWorkload();

}  // namespace fedbench::cli

#endif  // FEDBENCH_CLI_PRESETS_H_
