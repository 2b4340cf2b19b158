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

#ifndef FEDBENCH_DATA_SYNTH_H_
#define FEDBENCH_DATA_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "fedbench/data/dataset.h"

namespace fedbench::data {

enum class SynthKind { kBlobs, kLinearRegression };

SynthKind ParseSynthKind(std::string_view name);
std::string_view ToString(SynthKind k);

struct SynthSpec {
  SynthKind kind = SynthKind::kBlobs;
  std::size_t n = 1200;
  std::size_t d = 10;
  std::size_t classes = 3;
  // Blobs: per-sample Gaussian spread. Regression: label noise std.
  double noise = 1.0;
  // Blobs: std of the cluster centers.
  double separation = 3.0;
  std::uint64_t seed = 0;
};

// Blobs: class c (row i has class i mod classes) draws from N(center_c,
// noise^2 I) with centers ~ N(0, separation^2 I). Regression: x ~ N(0, I),
// y = x . w* + noise * eps with w* ~ N(0, I). Rows carry keys "r<i>".
Dataset SynthDataset(const SynthSpec& spec);

// The true weights behind a regression dataset built from the same spec.
std::vector<double> SynthRegressionWeights(const SynthSpec& spec);

}  // namespace fedbench::data

#endif  // FEDBENCH_DATA_SYNTH_H_
