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

#ifndef FEDBENCH_FL_ALGORITHMS_H_
#define FEDBENCH_FL_ALGORITHMS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fedbench/data/dataset.h"
#include "fedbench/models/mlp.h"
#include "fedbench/models/optimizer.h"
#include "fedbench/models/param_vector.h"
#include "fedbench/numkit/rng.h"

namespace fedbench::fl {

enum class Algorithm { kFedSgd, kFedAvg, kFedProx, kFedNova };

Algorithm ParseAlgorithm(std::string_view name);
std::string_view ToString(Algorithm a);

struct AlgoConfig {
  Algorithm algorithm = Algorithm::kFedSgd;
  double client_fraction = 1.0;
  std::size_t local_epochs = 1;
  double prox_mu = 0.0;
  std::size_t batch_size = 32;
  std::optional<std::size_t> max_rounds;  // nullopt: until convergence

  // Throws std::invalid_argument listing the first violated constraint.
  void Validate() const;
};

struct ClientUpdate {
  std::size_t client_id = 0;
  // Mean gradient for FedSGD, w_local - w_global otherwise.
  models::ParamVector payload;
  std::size_t local_steps = 1;  // tau
  std::size_t num_samples = 0;  // n
  std::size_t samples_processed = 0;
  std::uint64_t wire_bytes = 0;
};

// ceil(fraction * n) distinct ids, sorted ascending.
std::vector<std::size_t> SampleClients(std::size_t n_clients, double fraction,
                                       numkit::SeededRng& rng);

struct LocalTrainConfig {
  Algorithm algorithm = Algorithm::kFedAvg;
  std::size_t epochs = 1;
  std::size_t batch_size = 32;
  double prox_mu = 0.0;
  models::OptimizerConfig optimizer;
};

// FedSGD: one full-pass mean gradient, tau = 1. Otherwise E epochs of
// shuffled mini-batch steps from the global parameters (FedProx adds
// mu * (w - w_global) to each gradient); tau = E * batches per epoch.
ClientUpdate LocalTrain(const models::MlpSpec& spec,
                        const data::Dataset& client_data,
                        const models::ParamVector& global,
                        const LocalTrainConfig& config, numkit::SeededRng& rng,
                        std::size_t client_id = 0);

// Per-update weights n_i / sum(n) in the order given.
std::vector<double> SampleWeights(std::span<const ClientUpdate> updates);

// What one client contributes to the aggregate sum: weight * payload, and
// for FedNova weight * payload / tau.
std::vector<double> WeightedContribution(const ClientUpdate& update,
                                         Algorithm algorithm, double weight);

// Sum of weighted contributions, accumulated in client-id order so the
// result does not depend on the order of `updates`.
std::vector<double> CombineUpdates(std::span<const ClientUpdate> updates,
                                   Algorithm algorithm);

// sum(n_i / sum(n) * tau_i).
double EffectiveSteps(std::span<const ClientUpdate> updates);

// Applies a combined direction to the global parameters:
// fedsgd w - lr * g; fedavg/fedprox w + d; fednova w + tau_eff * d.
models::ParamVector ApplyCombined(const models::ParamVector& global,
                                  std::span<const double> combined,
                                  Algorithm algorithm, double tau_eff,
                                  double server_lr);

// CombineUpdates followed by ApplyCombined.
models::ParamVector Aggregate(std::span<const ClientUpdate> updates,
                              Algorithm algorithm,
                              const models::ParamVector& global,
                              double server_lr = 0.0);

}  // namespace fedbench::fl

#endif  // FEDBENCH_FL_ALGORITHMS_H_
