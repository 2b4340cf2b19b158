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

#include "fedbench/data/synth.h"

#include <stdexcept>
#include <string>

#include "fedbench/numkit/rng.h"

namespace fedbench::data {

SynthKind ParseSynthKind(std::string_view name) {
  if (name == "blobs" || name == "blobs-classification") {
    return SynthKind::kBlobs;
  }
  if (name == "linear-regression") return SynthKind::kLinearRegression;
  throw std::invalid_argument("unknown synthetic dataset kind '" +
                              std::string(name) + "'");
}

std::string_view ToString(SynthKind k) {
  return k == SynthKind::kBlobs ? "blobs" : "linear-regression";
}

std::vector<double> SynthRegressionWeights(const SynthSpec& spec) {
  numkit::SeededRng rng = numkit::SeededRng::Derive(spec.seed, {0x3E1});
  std::vector<double> w(spec.d);
  for (double& x : w) x = rng.Normal();
  return w;
}

Dataset SynthDataset(const SynthSpec& spec) {
  if (spec.n == 0 || spec.d == 0 || spec.classes == 0) {
    throw std::invalid_argument("SynthDataset: n, d, classes must be >= 1");
  }
  Dataset ds;
  ds.name = std::string(ToString(spec.kind));
  ds.features = DenseMatrix(spec.n, spec.d);
  ds.labels.resize(spec.n);
  ds.keys.resize(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) ds.keys[i] = "r" + std::to_string(i);

  if (spec.kind == SynthKind::kBlobs) {
    ds.num_classes = spec.classes;
    numkit::SeededRng centers_rng =
        numkit::SeededRng::Derive(spec.seed, {0xB10B});
    DenseMatrix centers(spec.classes, spec.d);
    for (double& c : centers.values()) c = centers_rng.Normal(0.0, spec.separation);
    numkit::SeededRng rng = numkit::SeededRng::Derive(spec.seed, {0xB10C});
    for (std::size_t i = 0; i < spec.n; ++i) {
      const std::size_t cls = i % spec.classes;
      ds.labels[i] = static_cast<double>(cls);
      for (std::size_t j = 0; j < spec.d; ++j) {
        ds.features(i, j) = centers(cls, j) + spec.noise * rng.Normal();
      }
    }
    return ds;
  }

  const std::vector<double> w = SynthRegressionWeights(spec);
  numkit::SeededRng rng = numkit::SeededRng::Derive(spec.seed, {0x3E2});
  for (std::size_t i = 0; i < spec.n; ++i) {
    double y = 0.0;
    for (std::size_t j = 0; j < spec.d; ++j) {
      const double x = rng.Normal();
      ds.features(i, j) = x;
      y += x * w[j];
    }
    ds.labels[i] = y + spec.noise * rng.Normal();
  }
  return ds;
}

}  // namespace fedbench::data
