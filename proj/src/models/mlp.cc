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

#include "fedbench/models/mlp.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fedbench/numkit/rng.h"

namespace fedbench::models {

namespace {

DenseMatrix SegmentMatrix(const ParamVector& p, std::size_t index) {
  const Segment& s = p.segments[index];
  auto view = p.segment(index);
  return DenseMatrix(s.rows, s.cols,
                     std::vector<double>(view.begin(), view.end()));
}

double Activate(Activation a, double x) {
  switch (a) {
    case Activation::kRelu:
      return x > 0.0 ? x : 0.0;
    case Activation::kTanh:
      return std::tanh(x);
  }
  return x;
}

double ActivateDerivative(Activation a, double pre) {
  switch (a) {
    case Activation::kRelu:
      return pre > 0.0 ? 1.0 : 0.0;
    case Activation::kTanh: {
      const double t = std::tanh(pre);
      return 1.0 - t * t;
    }
  }
  return 1.0;
}

DenseMatrix ApplyActivation(Activation a, const DenseMatrix& pre) {
  DenseMatrix out = pre;
  for (double& v : out.values()) v = Activate(a, v);
  return out;
}

void MultiplyByDerivative(Activation a, const DenseMatrix& pre,
                          DenseMatrix& grad) {
  auto g = grad.values();
  auto p = pre.values();
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] *= ActivateDerivative(a, p[i]);
  }
}

DenseMatrix ApplyHead(Head head, const DenseMatrix& logits) {
  DenseMatrix out = logits;
  switch (head) {
    case Head::kSoftmaxCrossEntropy:
      for (std::size_t r = 0; r < out.rows(); ++r) {
        auto row = out.row(r);
        const double top = *std::max_element(row.begin(), row.end());
        double total = 0.0;
        for (double& v : row) {
          v = std::exp(v - top);
          total += v;
        }
        for (double& v : row) v /= total;
      }
      break;
    case Head::kSigmoidBce:
      for (double& v : out.values()) v = 1.0 / (1.0 + std::exp(-v));
      break;
    case Head::kLinearMse:
      break;
  }
  return out;
}

void CheckTargets(const DenseMatrix& outputs, const DenseMatrix& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw std::invalid_argument(
        "targets shape (" + std::to_string(targets.rows()) + "x" +
        std::to_string(targets.cols()) + ") does not match outputs (" +
        std::to_string(outputs.rows()) + "x" +
        std::to_string(outputs.cols()) + ")");
  }
}

}  // namespace

Activation ParseActivation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "'");
}

Head ParseHead(std::string_view name) {
  if (name == "softmax-ce") return Head::kSoftmaxCrossEntropy;
  if (name == "sigmoid-bce") return Head::kSigmoidBce;
  if (name == "linear-mse") return Head::kLinearMse;
  throw std::invalid_argument("unknown head '" + std::string(name) + "'");
}

std::string_view ToString(Activation a) {
  return a == Activation::kRelu ? "relu" : "tanh";
}

std::string_view ToString(Head h) {
  switch (h) {
    case Head::kSoftmaxCrossEntropy:
      return "softmax-ce";
    case Head::kSigmoidBce:
      return "sigmoid-bce";
    case Head::kLinearMse:
      return "linear-mse";
  }
  return "?";
}

void MlpSpec::Validate() const {
  if (widths.size() < 2) {
    throw std::invalid_argument("MlpSpec: need at least input and output width");
  }
  for (std::size_t w : widths) {
    if (w == 0) throw std::invalid_argument("MlpSpec: widths must be positive");
  }
}

std::size_t MlpSpec::ParamCount() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += widths[l] * widths[l + 1] + widths[l + 1];
  }
  return n;
}

MlpSpec LogisticRegressionSpec(std::size_t inputs, std::size_t classes) {
  MlpSpec spec;
  if (classes <= 2) {
    spec.widths = {inputs, 1};
    spec.head = Head::kSigmoidBce;
  } else {
    spec.widths = {inputs, classes};
    spec.head = Head::kSoftmaxCrossEntropy;
  }
  return spec;
}

ParamVector ZeroParams(const MlpSpec& spec) {
  spec.Validate();
  ParamVector p;
  std::size_t offset = 0;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const std::size_t in = spec.widths[l];
    const std::size_t out = spec.widths[l + 1];
    const std::string prefix = "layer" + std::to_string(l);
    p.segments.push_back({prefix + ".weight", offset, in, out});
    offset += in * out;
    p.segments.push_back({prefix + ".bias", offset, 1, out});
    offset += out;
  }
  p.values.assign(offset, 0.0);
  return p;
}

ParamVector InitParams(const MlpSpec& spec, std::uint64_t seed) {
  ParamVector p = ZeroParams(spec);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    numkit::SeededRng rng = numkit::SeededRng::Derive(seed, {0x1417, l});
    const double bound = 1.0 / std::sqrt(static_cast<double>(spec.widths[l]));
    for (double& w : p.segment(2 * l)) w = bound * (2.0 * rng.Uniform() - 1.0);
  }
  return p;
}

ForwardResult Forward(const MlpSpec& spec, const ParamVector& params,
                      const DenseMatrix& batch) {
  spec.Validate();
  if (params.size() != spec.ParamCount()) {
    throw std::invalid_argument("Forward: parameter count mismatch");
  }
  if (batch.cols() != spec.input_width()) {
    throw std::invalid_argument(
        "Forward: batch width " + std::to_string(batch.cols()) +
        " != input width " + std::to_string(spec.input_width()));
  }
  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.raw_input = batch;
  DenseMatrix current =
      spec.activate_input ? ApplyActivation(spec.activation, batch) : batch;
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    DenseMatrix pre = MatMul(current, SegmentMatrix(params, 2 * l));
    auto bias = params.segment(2 * l + 1);
    for (std::size_t r = 0; r < pre.rows(); ++r) {
      auto row = pre.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) row[c] += bias[c];
    }
    cache.inputs.push_back(std::move(current));
    if (l + 1 < spec.num_layers()) {
      current = ApplyActivation(spec.activation, pre);
    }
    cache.pre.push_back(std::move(pre));
  }
  result.outputs = ApplyHead(spec.head, cache.pre.back());
  return result;
}

double Loss(const MlpSpec& spec, const DenseMatrix& outputs,
            const DenseMatrix& targets) {
  CheckTargets(outputs, targets);
  constexpr double kFloor = 1e-300;
  double total = 0.0;
  auto y = outputs.values();
  auto t = targets.values();
  switch (spec.head) {
    case Head::kSoftmaxCrossEntropy:
      for (std::size_t i = 0; i < y.size(); ++i) {
        if (t[i] != 0.0) total -= t[i] * std::log(std::max(y[i], kFloor));
      }
      break;
    case Head::kSigmoidBce:
      for (std::size_t i = 0; i < y.size(); ++i) {
        total -= t[i] * std::log(std::max(y[i], kFloor)) +
                 (1.0 - t[i]) * std::log(std::max(1.0 - y[i], kFloor));
      }
      break;
    case Head::kLinearMse:
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - t[i];
        total += 0.5 * d * d;
      }
      break;
  }
  return total / static_cast<double>(outputs.rows());
}

DenseMatrix LossGradient(const MlpSpec& spec, const DenseMatrix& outputs,
                         const DenseMatrix& targets) {
  CheckTargets(outputs, targets);
  // All three heads are canonical links: gradient is (output - target) / B.
  (void)spec;
  DenseMatrix g = outputs;
  auto gv = g.values();
  auto t = targets.values();
  const double inv = 1.0 / static_cast<double>(outputs.rows());
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = (gv[i] - t[i]) * inv;
  return g;
}

BackwardResult BackpropFromOutput(const MlpSpec& spec,
                                  const ParamVector& params,
                                  const ForwardCache& cache,
                                  const DenseMatrix& output_grad) {
  if (cache.pre.size() != spec.num_layers()) {
    throw std::invalid_argument("Backward: cache does not match spec");
  }
  if (output_grad.rows() != cache.pre.back().rows() ||
      output_grad.cols() != spec.output_width()) {
    throw std::invalid_argument("Backward: output gradient shape mismatch");
  }
  BackwardResult result;
  result.grad = params.ZerosLike();
  DenseMatrix delta = output_grad;
  for (std::size_t l = spec.num_layers(); l-- > 0;) {
    DenseMatrix gw = MatMulTransA(cache.inputs[l], delta);
    std::copy(gw.values().begin(), gw.values().end(),
              result.grad.segment(2 * l).begin());
    auto gb = result.grad.segment(2 * l + 1);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      auto row = delta.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) gb[c] += row[c];
    }
    DenseMatrix upstream = MatMulTransB(delta, SegmentMatrix(params, 2 * l));
    if (l > 0) {
      MultiplyByDerivative(spec.activation, cache.pre[l - 1], upstream);
    } else if (spec.activate_input) {
      MultiplyByDerivative(spec.activation, cache.raw_input, upstream);
    }
    delta = std::move(upstream);
  }
  result.input_grad = std::move(delta);
  return result;
}

ParamVector Backward(const MlpSpec& spec, const ParamVector& params,
                     const ForwardCache& cache, const DenseMatrix& targets) {
  DenseMatrix outputs = ApplyHead(spec.head, cache.pre.back());
  return BackpropFromOutput(spec, params, cache,
                            LossGradient(spec, outputs, targets))
      .grad;
}

DenseMatrix MakeTargets(const MlpSpec& spec,
                        const std::vector<double>& labels) {
  const std::size_t width = spec.output_width();
  DenseMatrix t(labels.size(), width);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (spec.head == Head::kSoftmaxCrossEntropy) {
      const auto k = static_cast<std::size_t>(labels[i]);
      if (labels[i] < 0 || k >= width ||
          static_cast<double>(k) != labels[i]) {
        throw std::invalid_argument("MakeTargets: label " +
                                    std::to_string(labels[i]) +
                                    " is not a class index below " +
                                    std::to_string(width));
      }
      t(i, k) = 1.0;
    } else {
      for (std::size_t c = 0; c < width; ++c) t(i, c) = labels[i];
    }
  }
  return t;
}

}  // namespace fedbench::models
