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

#include "fedbench/data/vertical.h"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fedbench::data {

namespace {

std::unordered_map<std::string, std::size_t> IndexKeys(const Dataset& ds) {
  if (ds.keys.size() != ds.size()) {
    throw std::invalid_argument("AlignVertical: dataset '" + ds.name +
                                "' has no join keys");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ds.keys.size(); ++i) {
    if (!index.emplace(ds.keys[i], i).second) {
      throw std::invalid_argument("AlignVertical: duplicate key '" +
                                  ds.keys[i] + "' in '" + ds.name + "'");
    }
  }
  return index;
}

}  // namespace

DenseMatrix AlignedDataset::PartyFeatures(std::size_t party) const {
  if (party > 1) throw std::out_of_range("AlignedDataset: party must be 0 or 1");
  const std::size_t begin = party == 0 ? 0 : width_a;
  const std::size_t width = party == 0 ? width_a : width_b;
  DenseMatrix out(joined.size(), width);
  for (std::size_t r = 0; r < joined.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      out(r, c) = joined.features(r, begin + c);
    }
  }
  return out;
}

AlignedDataset AlignVertical(const Dataset& a, const Dataset& b,
                             LabelOwner owner) {
  const auto index_a = IndexKeys(a);
  const auto index_b = IndexKeys(b);

  std::vector<std::string> keys = a.keys;
  for (const std::string& k : b.keys) {
    if (!index_a.contains(k)) keys.push_back(k);
  }

  AlignedDataset out;
  out.width_a = a.width();
  out.width_b = b.width();
  Dataset& j = out.joined;
  j.name = a.name + "+" + b.name;
  j.num_classes = owner == LabelOwner::kA ? a.num_classes : b.num_classes;
  j.features = DenseMatrix(keys.size(), out.width_a + out.width_b);
  j.keys = keys;
  j.labels.resize(keys.size());
  out.present_a.resize(keys.size());
  out.present_b.resize(keys.size());

  const Dataset& primary = owner == LabelOwner::kA ? a : b;
  const auto& primary_index = owner == LabelOwner::kA ? index_a : index_b;
  const Dataset& secondary = owner == LabelOwner::kA ? b : a;
  const auto& secondary_index = owner == LabelOwner::kA ? index_b : index_a;

  for (std::size_t r = 0; r < keys.size(); ++r) {
    auto ia = index_a.find(keys[r]);
    auto ib = index_b.find(keys[r]);
    out.present_a[r] = ia != index_a.end();
    out.present_b[r] = ib != index_b.end();
    if (out.present_a[r]) {
      auto src = a.features.row(ia->second);
      std::copy(src.begin(), src.end(), j.features.row(r).begin());
    }
    if (out.present_b[r]) {
      auto src = b.features.row(ib->second);
      std::copy(src.begin(), src.end(),
                j.features.row(r).begin() + static_cast<long>(out.width_a));
    }
    if (auto p = primary_index.find(keys[r]); p != primary_index.end()) {
      j.labels[r] = primary.labels.at(p->second);
    } else {
      auto s = secondary_index.find(keys[r]);
      if (secondary.labels.size() != secondary.size()) {
        throw std::invalid_argument("AlignVertical: no label for key '" +
                                    keys[r] + "'");
      }
      j.labels[r] = secondary.labels[s->second];
    }
  }
  return out;
}

}  // namespace fedbench::data
