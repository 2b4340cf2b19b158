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

#include "fedbench/data/dataset.h"

#include <stdexcept>
#include <vector>

#include "fedbench/numkit/rng.h"

namespace fedbench::data {

void Dataset::Validate() const {
  if (features.rows() != labels.size()) {
    throw std::invalid_argument("Dataset '" + name + "': " +
                                std::to_string(features.rows()) +
                                " feature rows but " +
                                std::to_string(labels.size()) + " labels");
  }
  if (!keys.empty() && keys.size() != labels.size()) {
    throw std::invalid_argument("Dataset '" + name +
                                "': key count differs from row count");
  }
  if (num_classes > 0) {
    for (double y : labels) {
      const auto k = static_cast<std::size_t>(y);
      if (y < 0 || static_cast<double>(k) != y || k >= num_classes) {
        throw std::invalid_argument("Dataset '" + name + "': label " +
                                    std::to_string(y) +
                                    " is not a valid class index");
      }
    }
  }
}

Dataset Dataset::Subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.name = name;
  out.num_classes = num_classes;
  out.features = features.SelectRows(indices);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) out.labels.push_back(labels[i]);
  if (!keys.empty()) {
    out.keys.reserve(indices.size());
    for (std::size_t i : indices) out.keys.push_back(keys[i]);
  }
  return out;
}

std::vector<std::size_t> Dataset::ClassCounts() const {
  if (num_classes == 0) {
    throw std::logic_error("ClassCounts on a regression dataset");
  }
  std::vector<std::size_t> counts(num_classes, 0);
  for (double y : labels) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

TrainTestVal SplitTrainTestVal(const Dataset& ds, std::uint64_t seed) {
  const std::size_t n = ds.size();
  if (n < 12) {
    throw std::invalid_argument("SplitTrainTestVal: need at least 12 rows, got " +
                                std::to_string(n));
  }
  // Integer arithmetic so the floors are exact.
  const std::size_t n_train = n * 8333 / 10000;
  const std::size_t n_test = n * 833 / 10000;
  numkit::SeededRng rng = numkit::SeededRng::Derive(seed, {0x5917});
  const std::vector<std::size_t> perm = rng.Permutation(n);
  std::span<const std::size_t> all(perm);
  TrainTestVal out;
  out.train = ds.Subset(all.subspan(0, n_train));
  out.test = ds.Subset(all.subspan(n_train, n_test));
  out.val = ds.Subset(all.subspan(n_train + n_test));
  out.train.name = ds.name + "/train";
  out.test.name = ds.name + "/test";
  out.val.name = ds.name + "/val";
  return out;
}

}  // namespace fedbench::data
