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

#ifndef FEDBENCH_DATA_DATASET_H_
#define FEDBENCH_DATA_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fedbench/numkit/dense_matrix.h"

namespace fedbench::data {

using numkit::DenseMatrix;

// n x d features with one label per row. num_classes > 0 marks a
// classification task whose labels are class indices; 0 means regression.
// keys, when present, identify rows for vertical alignment.
struct Dataset {
  std::string name;
  DenseMatrix features;
  std::vector<double> labels;
  std::vector<std::string> keys;
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::size_t width() const { return features.cols(); }
  bool is_classification() const { return num_classes > 0; }

  void Validate() const;
  Dataset Subset(std::span<const std::size_t> indices) const;
  // Per-class row counts; classification only.
  std::vector<std::size_t> ClassCounts() const;
};

struct TrainTestVal {
  Dataset train;
  Dataset test;
  Dataset val;
};

// Shuffled split with sizes floor(0.8333 n) / floor(0.0833 n) / remainder.
// Requires n >= 12.
TrainTestVal SplitTrainTestVal(const Dataset& ds, std::uint64_t seed);

}  // namespace fedbench::data

#endif  // FEDBENCH_DATA_DATASET_H_
