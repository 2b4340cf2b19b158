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

#ifndef FEDBENCH_SPLITNN_VERTICAL_TRAINER_H_
#define FEDBENCH_SPLITNN_VERTICAL_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedbench/data/dataset.h"
#include "fedbench/fl/engine.h"
#include "fedbench/models/optimizer.h"
#include "fedbench/models/plateau_scheduler.h"
#include "fedbench/netsim/netsim.h"
#include "fedbench/splitnn/split_model.h"
#include "fedbench/stats/metrics.h"

namespace fedbench::splitnn {

// Row-aligned data; party i owns feature columns
// [sum(party_widths[0..i)), sum(party_widths[0..i])). The server holds labels.
struct VerticalData {
  std::vector<std::size_t> party_widths;
  data::Dataset train;
  data::Dataset val;
  data::Dataset test;
};

struct VerticalSettings {
  SplitSpec spec;
  models::OptimizerConfig optimizer;
  models::PlateauConfig plateau;
  std::size_t batch_size = 64;
  std::size_t max_epochs = 200;
  netsim::Channel channel;
  fl::CostModel cost;
  stats::Metric metric = stats::Metric::kTop1;
  std::uint64_t seed = 0;
};

struct VerticalResult {
  // One RoundResult per epoch; actor ids are party indices.
  fl::ExperimentResult run;
  SplitParams final_params;
};

// Mini-batch SplitNN training. Each step the server broadcasts the shared
// row indices, parties send cut activations, the server runs the top model
// and returns cut gradients. Stops after the fourth lr reduction.
VerticalResult TrainVertical(const VerticalSettings& settings,
                             const VerticalData& data,
                             const fl::RoundObserver& observer = {});

std::vector<DenseMatrix> PartyBlocks(const VerticalData& data,
                                     const DenseMatrix& features);

}  // namespace fedbench::splitnn

#endif  // FEDBENCH_SPLITNN_VERTICAL_TRAINER_H_
