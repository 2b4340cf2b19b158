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

#ifndef FEDBENCH_DATA_PARTITION_H_
#define FEDBENCH_DATA_PARTITION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedbench/data/dataset.h"

namespace fedbench::data {

enum class PartitionScheme { kIid, kLabelSkew, kQuantitySkew, kPowerLaw };

PartitionScheme ParsePartitionScheme(std::string_view name);
std::string_view ToString(PartitionScheme s);

// How one training set is divided across clients, plus the realized
// per-client row indices (into the training set).
struct PartitionSpec {
  PartitionScheme scheme = PartitionScheme::kIid;
  double alpha = 0.0;
  std::size_t n_clients = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> client_indices;

  std::vector<std::size_t> ClientSizes() const;
  // Throws unless client_indices is a set partition of [0, n).
  void CheckSetPartition(std::size_t n) const;
};

// Shuffled round-robin; client sizes differ by at most one.
PartitionSpec PartitionIid(const Dataset& train, std::size_t n_clients,
                           std::uint64_t seed);

// Per class k, p_k ~ Dir_N(alpha) and client i receives floor(p_ki * n_k)
// rows of class k, remainders going to the largest fractional parts. Draws
// are repeated (up to 100 attempts) while any client ends up empty.
PartitionSpec PartitionLabelSkew(const Dataset& train, double alpha,
                                 std::size_t n_clients, std::uint64_t seed);

enum class QuantityMode { kDirichlet, kPowerLaw };

// Client sizes from one p ~ Dir_N(alpha) (or normalized power-law weights
// (i+1)^-alpha); every client keeps the global class mix.
PartitionSpec PartitionQuantitySkew(const Dataset& train, double alpha,
                                    std::size_t n_clients, std::uint64_t seed,
                                    QuantityMode mode);

// Stratified allocation with explicit client weights (sum normalized).
PartitionSpec PartitionByWeights(const Dataset& train,
                                 std::span<const double> weights,
                                 std::uint64_t seed);

// floor(w_i * total) plus largest-remainder rounding; ties to lower index.
std::vector<std::size_t> LargestRemainderCounts(std::span<const double> weights,
                                                std::size_t total);

}  // namespace fedbench::data

#endif  // FEDBENCH_DATA_PARTITION_H_
