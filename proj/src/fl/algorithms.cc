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

#include "fedbench/fl/algorithms.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fedbench::fl {

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "fedsgd") return Algorithm::kFedSgd;
  if (name == "fedavg") return Algorithm::kFedAvg;
  if (name == "fedprox") return Algorithm::kFedProx;
  if (name == "fednova") return Algorithm::kFedNova;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view ToString(Algorithm a) {
  switch (a) {
    case Algorithm::kFedSgd:
      return "fedsgd";
    case Algorithm::kFedAvg:
      return "fedavg";
    case Algorithm::kFedProx:
      return "fedprox";
    case Algorithm::kFedNova:
      return "fednova";
  }
  return "?";
}

void AlgoConfig::Validate() const {
  if (!(client_fraction > 0.0 && client_fraction <= 1.0)) {
    throw std::invalid_argument("client fraction must be in (0, 1]");
  }
  if (local_epochs == 0) throw std::invalid_argument("local epochs must be >= 1");
  if (batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  if (prox_mu < 0.0) throw std::invalid_argument("prox mu must be >= 0");
  if (algorithm == Algorithm::kFedSgd) {
    if (client_fraction != 1.0) {
      throw std::invalid_argument("fedsgd requires client fraction 1");
    }
    if (local_epochs != 1) {
      throw std::invalid_argument("fedsgd requires local epochs 1");
    }
  }
  if (algorithm != Algorithm::kFedProx && prox_mu != 0.0) {
    throw std::invalid_argument("prox mu is only used by fedprox");
  }
  if (max_rounds && *max_rounds == 0) {
    throw std::invalid_argument("max rounds must be >= 1");
  }
}

std::vector<std::size_t> SampleClients(std::size_t n_clients, double fraction,
                                       numkit::SeededRng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("SampleClients: fraction must be in (0, 1]");
  }
  const double exact = fraction * static_cast<double>(n_clients);
  auto m = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  m = std::clamp<std::size_t>(m, n_clients == 0 ? 0 : 1, n_clients);
  std::vector<std::size_t> ids(n_clients);
  std::iota(ids.begin(), ids.end(), 0);
  if (m < n_clients) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.Below(n_clients - i));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(m);
    std::sort(ids.begin(), ids.end());
  }
  return ids;
}

ClientUpdate LocalTrain(const models::MlpSpec& spec,
                        const data::Dataset& client_data,
                        const models::ParamVector& global,
                        const LocalTrainConfig& config, numkit::SeededRng& rng,
                        std::size_t client_id) {
  const std::size_t n = client_data.size();
  if (n == 0) throw std::invalid_argument("LocalTrain: empty client dataset");
  if (config.epochs == 0) throw std::invalid_argument("LocalTrain: E must be >= 1");
  ClientUpdate update;
  update.client_id = client_id;
  update.num_samples = n;

  if (config.algorithm == Algorithm::kFedSgd) {
    const auto fwd = models::Forward(spec, global, client_data.features);
    update.payload = models::Backward(
        spec, global, fwd.cache, models::MakeTargets(spec, client_data.labels));
    update.local_steps = 1;
    update.samples_processed = n;
    return update;
  }

  const std::size_t batch = std::min(config.batch_size, n);
  const std::size_t batches = (n + batch - 1) / batch;
  const bool proximal = config.algorithm == Algorithm::kFedProx;
  models::ParamVector local = global;
  models::OptimizerState optimizer(config.optimizer, local.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const std::vector<std::size_t> order = rng.Permutation(n);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t begin = b * batch;
      const std::size_t end = std::min(n, begin + batch);
      std::span<const std::size_t> rows(order.data() + begin, end - begin);
      const data::Dataset mb = client_data.Subset(rows);
      const auto fwd = models::Forward(spec, local, mb.features);
      models::ParamVector grad = models::Backward(
          spec, local, fwd.cache, models::MakeTargets(spec, mb.labels));
      if (proximal) {
        for (std::size_t i = 0; i < grad.size(); ++i) {
          grad.values[i] += config.prox_mu * (local.values[i] - global.values[i]);
        }
      }
      optimizer.Step(local.values, grad.values);
      update.samples_processed += rows.size();
    }
  }
  update.local_steps = config.epochs * batches;
  update.payload = global.ZerosLike();
  for (std::size_t i = 0; i < local.size(); ++i) {
    update.payload.values[i] = local.values[i] - global.values[i];
  }
  return update;
}

namespace {

// Indices of `updates` sorted by client id, so sums do not depend on the
// order updates arrive in.
std::vector<std::size_t> ClientIdOrder(std::span<const ClientUpdate> updates) {
  std::vector<std::size_t> order(updates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return updates[a].client_id < updates[b].client_id;
  });
  return order;
}

}  // namespace

std::vector<double> SampleWeights(std::span<const ClientUpdate> updates) {
  double total = 0.0;
  for (const auto& u : updates) total += static_cast<double>(u.num_samples);
  if (!(total > 0.0)) {
    throw std::invalid_argument("SampleWeights: updates carry no samples");
  }
  std::vector<double> w;
  w.reserve(updates.size());
  for (const auto& u : updates) {
    w.push_back(static_cast<double>(u.num_samples) / total);
  }
  return w;
}

std::vector<double> WeightedContribution(const ClientUpdate& update,
                                         Algorithm algorithm, double weight) {
  double factor = weight;
  if (algorithm == Algorithm::kFedNova) {
    if (update.local_steps == 0) {
      throw std::invalid_argument("FedNova: update with zero local steps");
    }
    factor /= static_cast<double>(update.local_steps);
  }
  std::vector<double> out(update.payload.values);
  for (double& x : out) x *= factor;
  return out;
}

std::vector<double> CombineUpdates(std::span<const ClientUpdate> updates,
                                   Algorithm algorithm) {
  if (updates.empty()) throw std::invalid_argument("aggregate: no updates");
  const std::size_t len = updates.front().payload.size();
  for (const auto& u : updates) {
    if (u.payload.size() != len) {
      throw std::invalid_argument("aggregate: payload lengths differ");
    }
  }
  const std::vector<double> weights = SampleWeights(updates);
  std::vector<double> sum(len, 0.0);
  for (std::size_t idx : ClientIdOrder(updates)) {
    const std::vector<double> c =
        WeightedContribution(updates[idx], algorithm, weights[idx]);
    for (std::size_t i = 0; i < len; ++i) sum[i] += c[i];
  }
  return sum;
}

double EffectiveSteps(std::span<const ClientUpdate> updates) {
  const std::vector<double> weights = SampleWeights(updates);
  double tau = 0.0;
  for (std::size_t i : ClientIdOrder(updates)) {
    tau += weights[i] * static_cast<double>(updates[i].local_steps);
  }
  return tau;
}

models::ParamVector ApplyCombined(const models::ParamVector& global,
                                  std::span<const double> combined,
                                  Algorithm algorithm, double tau_eff,
                                  double server_lr) {
  if (combined.size() != global.size()) {
    throw std::invalid_argument("aggregate: update length != model length");
  }
  models::ParamVector out = global;
  double factor = 1.0;
  switch (algorithm) {
    case Algorithm::kFedSgd:
      factor = -server_lr;
      break;
    case Algorithm::kFedAvg:
    case Algorithm::kFedProx:
      factor = 1.0;
      break;
    case Algorithm::kFedNova:
      factor = tau_eff;
      break;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] += factor * combined[i];
  }
  return out;
}

models::ParamVector Aggregate(std::span<const ClientUpdate> updates,
                              Algorithm algorithm,
                              const models::ParamVector& global,
                              double server_lr) {
  const std::vector<double> combined = CombineUpdates(updates, algorithm);
  const double tau = algorithm == Algorithm::kFedNova ? EffectiveSteps(updates) : 1.0;
  return ApplyCombined(global, combined, algorithm, tau, server_lr);
}

}  // namespace fedbench::fl
