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

#ifndef FEDBENCH_MODELS_MLP_H_
#define FEDBENCH_MODELS_MLP_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fedbench/models/param_vector.h"
#include "fedbench/numkit/dense_matrix.h"

namespace fedbench::models {

using numkit::DenseMatrix;

enum class Activation { kRelu, kTanh };
enum class Head { kSoftmaxCrossEntropy, kSigmoidBce, kLinearMse };

Activation ParseActivation(std::string_view name);
Head ParseHead(std::string_view name);
std::string_view ToString(Activation a);
std::string_view ToString(Head h);

// Dense feed-forward network. widths = {input, hidden..., output}; hidden
// layers use `activation`, the last layer feeds `head`. With activate_input
// the hidden activation is also applied to the raw input, which is how a
// SplitNN top model continues from concatenated cut-layer pre-activations.
struct MlpSpec {
  std::vector<std::size_t> widths;
  Activation activation = Activation::kRelu;
  Head head = Head::kSoftmaxCrossEntropy;
  bool activate_input = false;

  void Validate() const;
  std::size_t input_width() const { return widths.front(); }
  std::size_t output_width() const { return widths.back(); }
  std::size_t num_layers() const { return widths.size() - 1; }
  std::size_t ParamCount() const;
};

// Logistic / softmax regression is the zero-hidden-layer case.
MlpSpec LogisticRegressionSpec(std::size_t inputs, std::size_t classes);

// Fan-in scaled uniform weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)), zero
// biases. Deterministic in (spec, seed).
ParamVector InitParams(const MlpSpec& spec, std::uint64_t seed);
// Layout only, zero-filled.
ParamVector ZeroParams(const MlpSpec& spec);

struct ForwardCache {
  // inputs[l] is what layer l consumed (after activation where applicable);
  // pre[l] is layer l's affine output. inputs[0] is the activated batch when
  // activate_input is set; raw_input keeps the original batch.
  DenseMatrix raw_input;
  std::vector<DenseMatrix> inputs;
  std::vector<DenseMatrix> pre;
};

struct ForwardResult {
  DenseMatrix outputs;  // head applied: probabilities / sigmoid / identity
  ForwardCache cache;
};

ForwardResult Forward(const MlpSpec& spec, const ParamVector& params,
                      const DenseMatrix& batch);

// Mean loss over the batch. Targets are (batch x output width): one-hot for
// softmax-CE, 0/1 for BCE, real values for MSE. MSE uses 0.5 * ||y - t||^2.
double Loss(const MlpSpec& spec, const DenseMatrix& outputs,
            const DenseMatrix& targets);

// d(mean loss)/d(last-layer pre-activation).
DenseMatrix LossGradient(const MlpSpec& spec, const DenseMatrix& outputs,
                         const DenseMatrix& targets);

struct BackwardResult {
  ParamVector grad;
  DenseMatrix input_grad;  // d/d(raw input)
};

// Back-propagates a gradient with respect to the last layer's pre-activation.
BackwardResult BackpropFromOutput(const MlpSpec& spec,
                                  const ParamVector& params,
                                  const ForwardCache& cache,
                                  const DenseMatrix& output_grad);

// Gradient of the mean loss with respect to params.
ParamVector Backward(const MlpSpec& spec, const ParamVector& params,
                     const ForwardCache& cache, const DenseMatrix& targets);

// Labels (class index or real target) to the target matrix the head expects.
DenseMatrix MakeTargets(const MlpSpec& spec, const std::vector<double>& labels);

}  // namespace fedbench::models

#endif  // FEDBENCH_MODELS_MLP_H_
