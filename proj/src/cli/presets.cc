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

#include "fedbench/cli/presets.h"

#include <stdexcept>
#include <string>

namespace fedbench::cli {
namespace {

ExperimentConfig Baseline() {
  ExperimentConfig c;
  c.name = "baseline";
  c.workload = DefaultWorkload();
  c.mode = SetupMode::kFederated;
  c.scheme = data::PartitionScheme::kIid;
  c.clients = 5;
  c.algo.algorithm = fl::Algorithm::kFedSgd;
  c.algo.client_fraction = 1.0;
  c.algo.local_epochs = 1;
  c.algo.max_rounds = 1000;
  c.optimizer.kind = models::OptimizerKind::kSgdMomentum;
  c.optimizer.lr = 0.1;
  c.optimizer.momentum = 0.9;
  c.plateau.factor = 0.1;
  c.plateau.patience = 10;
  c.repetitions = 3;
  c.base_seed = 1;
  return c;
}

ExperimentConfig FedAvgFamily(std::string name) {
  ExperimentConfig c = Baseline();
  c.name = std::move(name);
  c.algo.algorithm = fl::Algorithm::kFedAvg;
  c.algo.client_fraction = 0.4;
  c.algo.local_epochs = 2;
  c.algo.batch_size = 32;
  c.optimizer.lr = 0.01;
  c.optimizer.momentum = 0.9;
  return c;
}

}  // namespace

WorkloadConfig DefaultWorkload() {
  WorkloadConfig w;
  w.source = Source::kSynth;
  w.synth.kind = data::SynthKind::kBlobs;
  w.synth.n = 6000;
  w.synth.d = 20;
  w.synth.classes = 10;
  w.synth.noise = 1.0;
  w.synth.separation = 0.6;
  w.synth.seed = 2026;
  w.split_seed = 17;
  return w;
}

const std::vector<PresetInfo>& PresetCatalog() {
  static const std::vector<PresetInfo> catalog = {
      {"baseline", "FedSGD, 5 IID clients, full participation, no add-ons"},
      {"noniid-label", "FedAvg, one client per round, Dirichlet label skew (alpha 0.5)"},
      {"noniid-quantity", "FedAvg, one client per round, Dirichlet quantity skew (alpha 0.5)"},
      {"algorithms", "FedProx (mu 0.01) with client fraction 0.4, E = 2"},
      {"smc", "baseline with additive secret-sharing aggregation"},
      {"dp", "FedAvg logistic model with DP (epsilon 1, clip 0.1), capped at 300 rounds"},
      {"compression", "baseline with TopK (k = 1%) and damped error feedback"},
      {"hybrid", "secret sharing (parts_sent 2) + DP (epsilon 1) + TopK 1% at 100 Mbps"},
      {"vertical-baseline", "SplitNN over two parties with zero-padded alignment"},
  };
  return catalog;
}

ExperimentConfig Preset(std::string_view name) {
  ExperimentConfig c;
  if (name == "baseline") {
    c = Baseline();
  } else if (name == "noniid-label") {
    c = FedAvgFamily("noniid-label");
    c.algo.client_fraction = 0.2;
    c.algo.local_epochs = 5;
    c.scheme = data::PartitionScheme::kLabelSkew;
    c.alpha = 0.5;
  } else if (name == "noniid-quantity") {
    c = FedAvgFamily("noniid-quantity");
    c.algo.client_fraction = 0.2;
    c.algo.local_epochs = 5;
    c.scheme = data::PartitionScheme::kQuantitySkew;
    c.alpha = 0.5;
  } else if (name == "algorithms") {
    c = FedAvgFamily("algorithms");
    c.algo.algorithm = fl::Algorithm::kFedProx;
    c.algo.prox_mu = 0.01;
  } else if (name == "smc") {
    c = Baseline();
    c.name = "smc";
    c.secagg.enabled = true;
    c.secagg.parts = 2;
  } else if (name == "dp") {
    c = Baseline();
    c.name = "dp";
    privacy::DpConfig dp;
    dp.clip = 0.1;
    dp.target_epsilon = 1.0;
    dp.rounds = 300;
    c.dp = dp;
    c.algo.algorithm = fl::Algorithm::kFedAvg;
    c.algo.local_epochs = 1;
    c.algo.batch_size = 32;
    c.algo.max_rounds = 300;
    c.optimizer.lr = 0.05;
    c.hidden = std::vector<std::size_t>{};
  } else if (name == "compression") {
    c = Baseline();
    c.name = "compression";
    c.compression.method = compression::Method::kTopK;
    c.compression.k_fraction = 0.01;
    c.compression.error_feedback = true;
    c.compression.damping = 0.5;
  } else if (name == "hybrid") {
    c = Preset("dp");
    c.name = "hybrid";
    c.secagg.enabled = true;
    c.secagg.parts = 3;  // two parts sent, one kept
    c.compression.method = compression::Method::kTopK;
    c.compression.k_fraction = 0.01;
    c.channel.bandwidth_bps = 100e6;
  } else if (name == "vertical-baseline") {
    c = Baseline();
    c.name = "vertical-baseline";
    c.mode = SetupMode::kVertical;
    c.vertical.party_widths = {10, 10};
    c.vertical.bottom_hidden = {{20}, {20}};
    c.vertical.cut_widths = {10, 10};
    c.vertical.top_hidden = {};
    c.vertical.overlap = 0.95;
    c.vertical.batch_size = 64;
    c.vertical.max_epochs = 200;
    c.optimizer.lr = 0.01;
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  c.output_dir = "runs/" + c.name;
  return c;
}

}  // namespace fedbench::cli
