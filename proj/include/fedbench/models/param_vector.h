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

#ifndef FEDBENCH_MODELS_PARAM_VECTOR_H_
#define FEDBENCH_MODELS_PARAM_VECTOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fedbench::models {

// One named slice of a flat parameter vector. Weight matrices are stored
// row-major as (fan_in x fan_out); biases as (1 x fan_out).
struct Segment {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
  bool is_matrix() const { return rows > 1 && cols > 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Flat model parameters (or a gradient / delta with the same layout).
struct ParamVector {
  std::vector<double> values;
  std::vector<Segment> segments;

  std::size_t size() const { return values.size(); }
  std::span<double> segment(std::size_t i) {
    return {values.data() + segments[i].offset, segments[i].size()};
  }
  std::span<const double> segment(std::size_t i) const {
    return {values.data() + segments[i].offset, segments[i].size()};
  }

  // Same layout, all zeros.
  ParamVector ZerosLike() const;
  bool SameLayout(const ParamVector& other) const;
};

}  // namespace fedbench::models

#endif  // FEDBENCH_MODELS_PARAM_VECTOR_H_
