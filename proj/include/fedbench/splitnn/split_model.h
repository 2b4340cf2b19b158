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

#ifndef FEDBENCH_SPLITNN_SPLIT_MODEL_H_
#define FEDBENCH_SPLITNN_SPLIT_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fedbench/models/mlp.h"
#include "fedbench/models/param_vector.h"
#include "fedbench/numkit/dense_matrix.h"

namespace fedbench::splitnn {

using models::ForwardCache;
using models::MlpSpec;
using models::ParamVector;
using numkit::DenseMatrix;

// Party bottoms end at the cut layer with a linear head, so the cut signal
// is the raw pre-activation. The server's top model has activate_input set
// and applies the hidden activation to the concatenation.
struct SplitSpec {
  std::vector<MlpSpec> bottoms;
  MlpSpec top;

  // Throws std::invalid_argument unless top input width == sum of cuts.
  void Validate() const;
  std::vector<std::size_t> cut_widths() const;
  std::size_t num_parties() const { return bottoms.size(); }
};

// Bottom i maps party_widths[i] through bottom_hidden[i]... to cut_widths[i];
// the top maps sum(cut) through top_hidden to `outputs`.
SplitSpec MakeSplitSpec(const std::vector<std::size_t>& party_widths,
                        const std::vector<std::vector<std::size_t>>& bottom_hidden,
                        const std::vector<std::size_t>& cut_widths,
                        const std::vector<std::size_t>& top_hidden,
                        std::size_t outputs, models::Activation activation,
                        models::Head head);

struct SplitParams {
  std::vector<ParamVector> bottoms;
  ParamVector top;
};

SplitParams InitSplitParams(const SplitSpec& spec, std::uint64_t seed);

struct SplitCaches {
  std::vector<ForwardCache> bottoms;
  ForwardCache top;
};

struct SplitForwardResult {
  DenseMatrix outputs;
  std::vector<DenseMatrix> cuts;  // per party, batch x cut width
  SplitCaches caches;
};

// Errors on party count or row-count mismatch.
SplitForwardResult SplitForward(const SplitSpec& spec, const SplitParams& params,
                                const std::vector<DenseMatrix>& party_batches);

struct SplitGradients {
  ParamVector top;
  std::vector<ParamVector> bottoms;
  std::vector<DenseMatrix> cut_grads;  // what the server sends back
};

SplitGradients SplitBackwardFromOutput(const SplitSpec& spec,
                                       const SplitParams& params,
                                       const SplitCaches& caches,
                                       const DenseMatrix& output_grad);

SplitGradients SplitBackward(const SplitSpec& spec, const SplitParams& params,
                             const SplitCaches& caches,
                             const DenseMatrix& targets);

// The single network the split computes: bottom layers become
// block-diagonal layers over the concatenated party features. Requires all
// bottoms to share depth and activation with the top.
struct Monolithic {
  MlpSpec spec;
  ParamVector params;
};

Monolithic ToMonolithic(const SplitSpec& spec, const SplitParams& params);

// Concatenates party feature blocks column-wise.
DenseMatrix ConcatColumns(const std::vector<DenseMatrix>& blocks);

// Splits a matrix into consecutive column blocks of the given widths.
std::vector<DenseMatrix> SplitColumns(const DenseMatrix& m,
                                      const std::vector<std::size_t>& widths);

}  // namespace fedbench::splitnn

#endif  // FEDBENCH_SPLITNN_SPLIT_MODEL_H_
