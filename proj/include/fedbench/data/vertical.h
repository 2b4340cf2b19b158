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

#ifndef FEDBENCH_DATA_VERTICAL_H_
#define FEDBENCH_DATA_VERTICAL_H_

#include <cstddef>
#include <vector>

#include "fedbench/data/dataset.h"

namespace fedbench::data {

enum class LabelOwner { kA, kB };

// Outer join of two keyed datasets. Columns [0, width_a) come from A and
// [width_a, width_a + width_b) from B; a side that lacks a key contributes
// zeros. Row order: A's keys in A order, then B-only keys in B order.
struct AlignedDataset {
  Dataset joined;
  std::size_t width_a = 0;
  std::size_t width_b = 0;
  std::vector<bool> present_a;
  std::vector<bool> present_b;

  // Column block of one party, for SplitNN bottoms.
  DenseMatrix PartyFeatures(std::size_t party) const;
};

// Labels come from the owner side, or from the other side for rows the
// owner lacks. Duplicate keys inside either input are rejected.
AlignedDataset AlignVertical(const Dataset& a, const Dataset& b,
                             LabelOwner owner = LabelOwner::kA);

}  // namespace fedbench::data

#endif  // FEDBENCH_DATA_VERTICAL_H_
