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

#ifndef FEDBENCH_FL_ENGINE_H_
#define FEDBENCH_FL_ENGINE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "fedbench/compression/compression.h"
#include "fedbench/data/dataset.h"
#include "fedbench/fl/algorithms.h"
#include "fedbench/models/mlp.h"
#include "fedbench/models/optimizer.h"
#include "fedbench/models/param_vector.h"
#include "fedbench/models/plateau_scheduler.h"
#include "fedbench/netsim/netsim.h"
#include "fedbench/privacy/privacy.h"
#include "fedbench/secagg/secure_agg.h"
#include "fedbench/stats/metrics.h"

namespace fedbench::fl {

// Simulated compute costs. Values are seconds per unit of work.
struct CostModel {
  double train_per_sample_param = 2e-8;  // forward + backward
  double eval_per_sample_param = 7e-9;   // forward only
  double encrypt_per_value = 5e-8;       // encode, share, combine, decode
  double other_per_value = 1e-8;         // serialization, DP, compression
  bool wall_clock = false;               // measure local training instead

  void Validate() const;
};

struct SecureAggConfig {
  bool enabled = false;
  std::size_t parts = 2;  // K, including the part a client keeps
  double scale = 1.0 / static_cast<double>(1 << 20);
  std::uint64_t modulus = secagg::kMersenne61;
};

struct RunSettings {
  models::MlpSpec model;
  models::OptimizerConfig optimizer;
  models::PlateauConfig plateau;
  bool schedule_on_loss = true;  // false: schedule on the validation metric
  AlgoConfig algo;
  std::optional<privacy::DpConfig> dp;
  SecureAggConfig secagg;
  compression::CompressionConfig compression;
  netsim::Channel channel;
  CostModel cost;
  stats::Metric metric = stats::Metric::kTop1;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool record_params = false;
  // Hard stop when algo.max_rounds is unset.
  std::size_t round_limit = 100000;

  void Validate(std::size_t n_clients) const;
};

struct FederatedData {
  std::vector<data::Dataset> clients;
  data::Dataset val;
  data::Dataset test;
};

// One actor's ledger movement during a round.
struct ActorDelta {
  netsim::ActorId actor = netsim::kServer;
  netsim::BucketTimes buckets;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
};

// Per-actor deltas between two ledger snapshots, in actor-id order.
std::vector<ActorDelta> LedgerDeltas(
    const std::map<netsim::ActorId, netsim::ActorAccount>& before,
    const std::map<netsim::ActorId, netsim::ActorAccount>& after);

struct RoundResult {
  std::size_t round = 0;
  std::vector<std::size_t> participants;
  double metric = 0.0;    // validation metric
  double val_loss = 0.0;
  double lr = 0.0;        // lr used this round
  int reduction_count = 0;
  std::uint64_t bytes_up = 0;    // client -> server
  std::uint64_t bytes_down = 0;  // server -> client
  std::uint64_t bytes_peer = 0;  // client -> client shares
  netsim::BucketTimes buckets;   // this round, summed over all actors
  std::vector<ActorDelta> actors;
  std::optional<double> epsilon;
  std::vector<double> global_params;  // only with record_params
};

struct ExperimentResult {
  std::vector<RoundResult> rounds;
  models::ParamVector final_params;
  double final_metric = 0.0;  // test set
  std::optional<std::size_t> convergence_rounds;
  std::size_t rounds_run = 0;
  double samples_processed = 0.0;
  double throughput = 0.0;
  double overhead = 0.0;
  double uplink_ratio = 1.0;
  std::optional<double> epsilon;
  double sigma = 0.0;
  netsim::TimeLedger ledger;
  std::vector<privacy::PrivacyRow> privacy_rows;
  bool conserved_every_round = true;
};

using RoundObserver = std::function<void(const RoundResult&)>;

ExperimentResult RunExperiment(const RunSettings& settings,
                               const FederatedData& data,
                               const RoundObserver& observer = {});

// Mean loss of `params` on `ds` under the model head.
double DatasetLoss(const models::MlpSpec& spec,
                   const models::ParamVector& params, const data::Dataset& ds);

}  // namespace fedbench::fl

#endif  // FEDBENCH_FL_ENGINE_H_
