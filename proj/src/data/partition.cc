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

#include "fedbench/data/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedbench/numkit/rng.h"
#include "fedbench/numkit/vector_ops.h"

namespace fedbench::data {

namespace {

constexpr int kMaxResampleAttempts = 100;

void CheckClientCount(std::size_t n_clients, std::size_t n) {
  if (n_clients == 0) {
    throw std::invalid_argument("partition: n_clients must be >= 1");
  }
  if (n_clients > n) {
    throw std::invalid_argument("partition: " + std::to_string(n_clients) +
                                " clients but only " + std::to_string(n) +
                                " rows");
  }
}

void CheckAlpha(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("partition: alpha must be > 0");
  }
}

// Orders rows so that every contiguous run has (up to rounding) the global
// class mix: each row is keyed by its fractional position within its class.
std::vector<std::size_t> StratifiedOrder(const Dataset& train,
                                         numkit::SeededRng& rng) {
  const std::size_t n = train.size();
  if (!train.is_classification()) return rng.Permutation(n);
  std::vector<std::vector<std::size_t>> by_class(train.num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(train.labels[i])].push_back(i);
  }
  struct Keyed {
    double position;
    std::size_t cls;
    std::size_t index;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(n);
  for (std::size_t k = 0; k < by_class.size(); ++k) {
    rng.Shuffle(by_class[k]);
    const double nk = static_cast<double>(by_class[k].size());
    for (std::size_t r = 0; r < by_class[k].size(); ++r) {
      keyed.push_back({(static_cast<double>(r) + 0.5) / nk, k, by_class[k][r]});
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.cls < b.cls;
  });
  std::vector<std::size_t> order;
  order.reserve(n);
  for (const Keyed& k : keyed) order.push_back(k.index);
  return order;
}

PartitionSpec ChunkBySizes(const std::vector<std::size_t>& order,
                           const std::vector<std::size_t>& sizes) {
  PartitionSpec spec;
  spec.n_clients = sizes.size();
  spec.client_indices.resize(sizes.size());
  std::size_t cursor = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    spec.client_indices[c].assign(order.begin() + cursor,
                                  order.begin() + cursor + sizes[c]);
    cursor += sizes[c];
  }
  return spec;
}

bool AnyZero(const std::vector<std::size_t>& sizes) {
  return std::find(sizes.begin(), sizes.end(), 0u) != sizes.end();
}

}  // namespace

PartitionScheme ParsePartitionScheme(std::string_view name) {
  if (name == "iid") return PartitionScheme::kIid;
  if (name == "label-skew-dirichlet" || name == "label-skew") {
    return PartitionScheme::kLabelSkew;
  }
  if (name == "quantity-skew-dirichlet" || name == "quantity-skew") {
    return PartitionScheme::kQuantitySkew;
  }
  if (name == "power-law") return PartitionScheme::kPowerLaw;
  throw std::invalid_argument("unknown partition scheme '" + std::string(name) +
                              "'");
}

std::string_view ToString(PartitionScheme s) {
  switch (s) {
    case PartitionScheme::kIid:
      return "iid";
    case PartitionScheme::kLabelSkew:
      return "label-skew-dirichlet";
    case PartitionScheme::kQuantitySkew:
      return "quantity-skew-dirichlet";
    case PartitionScheme::kPowerLaw:
      return "power-law";
  }
  return "?";
}

std::vector<std::size_t> PartitionSpec::ClientSizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& c : client_indices) sizes.push_back(c.size());
  return sizes;
}

void PartitionSpec::CheckSetPartition(std::size_t n) const {
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (const auto& client : client_indices) {
    for (std::size_t i : client) {
      if (i >= n) {
        throw std::logic_error("partition index " + std::to_string(i) +
                               " out of range");
      }
      if (seen[i]) {
        throw std::logic_error("partition index " + std::to_string(i) +
                               " assigned twice");
      }
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n) {
    throw std::logic_error("partition covers " + std::to_string(total) +
                           " of " + std::to_string(n) + " rows");
  }
}

std::vector<std::size_t> LargestRemainderCounts(std::span<const double> weights,
                                                std::size_t total) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) {
    throw std::invalid_argument("LargestRemainderCounts: weights sum to zero");
  }
  std::vector<std::size_t> counts(weights.size());
  std::vector<double> frac(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument("LargestRemainderCounts: negative weight");
    }
    const double exact = weights[i] / sum * static_cast<double>(total);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    frac[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  // Floating error can leave the floors summing past total on pathological
  // inputs; trim from the smallest fractional parts.
  for (std::size_t r = order.size(); assigned > total && r-- > 0;) {
    if (counts[order[r]] > 0) {
      --counts[order[r]];
      --assigned;
    }
  }
  for (std::size_t r = 0; assigned < total; r = (r + 1) % order.size()) {
    ++counts[order[r]];
    ++assigned;
  }
  return counts;
}

PartitionSpec PartitionIid(const Dataset& train, std::size_t n_clients,
                           std::uint64_t seed) {
  const std::size_t n = train.size();
  CheckClientCount(n_clients, n);
  numkit::SeededRng rng = numkit::SeededRng::Derive(seed, {0x11D});
  const std::vector<std::size_t> perm = rng.Permutation(n);
  PartitionSpec spec;
  spec.scheme = PartitionScheme::kIid;
  spec.n_clients = n_clients;
  spec.seed = seed;
  spec.client_indices.resize(n_clients);
  for (std::size_t j = 0; j < n; ++j) {
    spec.client_indices[j % n_clients].push_back(perm[j]);
  }
  return spec;
}

PartitionSpec PartitionLabelSkew(const Dataset& train, double alpha,
                                 std::size_t n_clients, std::uint64_t seed) {
  CheckAlpha(alpha);
  if (!train.is_classification()) {
    throw std::invalid_argument("label skew needs class-index labels");
  }
  CheckClientCount(n_clients, train.size());
  std::vector<std::vector<std::size_t>> by_class(train.num_classes);
  for (std::size_t i = 0; i < train.size(); ++i) {
    by_class[static_cast<std::size_t>(train.labels[i])].push_back(i);
  }
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    numkit::SeededRng rng = numkit::SeededRng::Derive(
        seed, {0x1AB, static_cast<std::uint64_t>(attempt)});
    PartitionSpec spec;
    spec.scheme = PartitionScheme::kLabelSkew;
    spec.alpha = alpha;
    spec.n_clients = n_clients;
    spec.seed = seed;
    spec.client_indices.resize(n_clients);
    for (std::size_t k = 0; k < by_class.size(); ++k) {
      std::vector<std::size_t> rows = by_class[k];
      rng.Shuffle(rows);
      const std::vector<double> p = numkit::SampleDirichlet(alpha, n_clients, rng);
      const std::vector<std::size_t> counts =
          LargestRemainderCounts(p, rows.size());
      std::size_t cursor = 0;
      for (std::size_t c = 0; c < n_clients; ++c) {
        auto& dst = spec.client_indices[c];
        dst.insert(dst.end(), rows.begin() + cursor,
                   rows.begin() + cursor + counts[c]);
        cursor += counts[c];
      }
    }
    if (!AnyZero(spec.ClientSizes())) {
      for (auto& c : spec.client_indices) std::sort(c.begin(), c.end());
      return spec;
    }
  }
  throw std::runtime_error("label skew: every client non-empty not reached in " +
                           std::to_string(kMaxResampleAttempts) + " draws");
}

PartitionSpec PartitionByWeights(const Dataset& train,
                                 std::span<const double> weights,
                                 std::uint64_t seed) {
  CheckClientCount(weights.size(), train.size());
  numkit::SeededRng rng = numkit::SeededRng::Derive(seed, {0x57A7});
  const std::vector<std::size_t> sizes =
      LargestRemainderCounts(weights, train.size());
  PartitionSpec spec = ChunkBySizes(StratifiedOrder(train, rng), sizes);
  spec.scheme = PartitionScheme::kQuantitySkew;
  spec.seed = seed;
  for (auto& c : spec.client_indices) std::sort(c.begin(), c.end());
  return spec;
}

PartitionSpec PartitionQuantitySkew(const Dataset& train, double alpha,
                                    std::size_t n_clients, std::uint64_t seed,
                                    QuantityMode mode) {
  CheckAlpha(alpha);
  CheckClientCount(n_clients, train.size());
  if (mode == QuantityMode::kPowerLaw) {
    std::vector<double> w(n_clients);
    for (std::size_t i = 0; i < n_clients; ++i) {
      w[i] = std::pow(static_cast<double>(i + 1), -alpha);
    }
    if (AnyZero(LargestRemainderCounts(w, train.size()))) {
      throw std::runtime_error("power-law partition leaves a client empty");
    }
    PartitionSpec spec = PartitionByWeights(train, w, seed);
    spec.scheme = PartitionScheme::kPowerLaw;
    spec.alpha = alpha;
    return spec;
  }
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    numkit::SeededRng rng = numkit::SeededRng::Derive(
        seed, {0x0A7, static_cast<std::uint64_t>(attempt)});
    const std::vector<double> p = numkit::SampleDirichlet(alpha, n_clients, rng);
    if (AnyZero(LargestRemainderCounts(p, train.size()))) continue;
    PartitionSpec spec = PartitionByWeights(train, p, seed);
    spec.alpha = alpha;
    return spec;
  }
  throw std::runtime_error(
      "quantity skew: every client non-empty not reached in " +
      std::to_string(kMaxResampleAttempts) + " draws");
}

}  // namespace fedbench::data
