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

#include "fedbench/splitnn/split_model.h"

#include <numeric>
#include <stdexcept>
#include <string>

#include "fedbench/numkit/rng.h"

namespace fedbench::splitnn {

void SplitSpec::Validate() const {
  if (bottoms.empty()) throw std::invalid_argument("split: no parties");
  std::size_t cut_total = 0;
  for (std::size_t i = 0; i < bottoms.size(); ++i) {
    bottoms[i].Validate();
    if (bottoms[i].head != models::Head::kLinearMse) {
      throw std::invalid_argument("split: party bottom " + std::to_string(i) +
                                  " must end in a linear cut layer");
    }
    cut_total += bottoms[i].output_width();
  }
  top.Validate();
  if (top.input_width() != cut_total) {
    throw std::invalid_argument("split: top input width " +
                                std::to_string(top.input_width()) +
                                " != sum of cut widths " +
                                std::to_string(cut_total));
  }
}

std::vector<std::size_t> SplitSpec::cut_widths() const {
  std::vector<std::size_t> out;
  out.reserve(bottoms.size());
  for (const auto& b : bottoms) out.push_back(b.output_width());
  return out;
}

SplitSpec MakeSplitSpec(
    const std::vector<std::size_t>& party_widths,
    const std::vector<std::vector<std::size_t>>& bottom_hidden,
    const std::vector<std::size_t>& cut_widths,
    const std::vector<std::size_t>& top_hidden, std::size_t outputs,
    models::Activation activation, models::Head head) {
  if (party_widths.size() != cut_widths.size() ||
      party_widths.size() != bottom_hidden.size()) {
    throw std::invalid_argument("split: per-party lists differ in length");
  }
  SplitSpec spec;
  std::size_t cut_total = 0;
  for (std::size_t i = 0; i < party_widths.size(); ++i) {
    MlpSpec b;
    b.widths.push_back(party_widths[i]);
    b.widths.insert(b.widths.end(), bottom_hidden[i].begin(),
                    bottom_hidden[i].end());
    b.widths.push_back(cut_widths[i]);
    b.activation = activation;
    b.head = models::Head::kLinearMse;
    spec.bottoms.push_back(std::move(b));
    cut_total += cut_widths[i];
  }
  spec.top.widths.push_back(cut_total);
  spec.top.widths.insert(spec.top.widths.end(), top_hidden.begin(),
                         top_hidden.end());
  spec.top.widths.push_back(outputs);
  spec.top.activation = activation;
  spec.top.head = head;
  spec.top.activate_input = true;
  spec.Validate();
  return spec;
}

SplitParams InitSplitParams(const SplitSpec& spec, std::uint64_t seed) {
  spec.Validate();
  SplitParams p;
  for (std::size_t i = 0; i < spec.bottoms.size(); ++i) {
    p.bottoms.push_back(models::InitParams(
        spec.bottoms[i], numkit::Mix64(seed ^ (0xB0770 + i))));
  }
  p.top = models::InitParams(spec.top, numkit::Mix64(seed ^ 0x70B));
  return p;
}

DenseMatrix ConcatColumns(const std::vector<DenseMatrix>& blocks) {
  if (blocks.empty()) return DenseMatrix();
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) {
      throw std::invalid_argument("concat: blocks differ in row count");
    }
    cols += b.cols();
  }
  DenseMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t c0 = 0;
    for (const auto& b : blocks) {
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c0 + c) = b(r, c);
      c0 += b.cols();
    }
  }
  return out;
}

std::vector<DenseMatrix> SplitColumns(const DenseMatrix& m,
                                      const std::vector<std::size_t>& widths) {
  const std::size_t total = std::accumulate(widths.begin(), widths.end(),
                                            std::size_t{0});
  if (total != m.cols()) {
    throw std::invalid_argument("split columns: widths do not cover matrix");
  }
  std::vector<DenseMatrix> out;
  std::size_t c0 = 0;
  for (std::size_t w : widths) {
    DenseMatrix block(m.rows(), w);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < w; ++c) block(r, c) = m(r, c0 + c);
    }
    out.push_back(std::move(block));
    c0 += w;
  }
  return out;
}

SplitForwardResult SplitForward(const SplitSpec& spec, const SplitParams& params,
                                const std::vector<DenseMatrix>& party_batches) {
  spec.Validate();
  if (party_batches.size() != spec.num_parties() ||
      params.bottoms.size() != spec.num_parties()) {
    throw std::invalid_argument("split forward: party count mismatch");
  }
  const std::size_t rows = party_batches.front().rows();
  SplitForwardResult out;
  for (std::size_t i = 0; i < spec.num_parties(); ++i) {
    if (party_batches[i].rows() != rows) {
      throw std::invalid_argument("split forward: party batches are not aligned");
    }
    models::ForwardResult f =
        models::Forward(spec.bottoms[i], params.bottoms[i], party_batches[i]);
    out.cuts.push_back(std::move(f.outputs));
    out.caches.bottoms.push_back(std::move(f.cache));
  }
  models::ForwardResult top =
      models::Forward(spec.top, params.top, ConcatColumns(out.cuts));
  out.outputs = std::move(top.outputs);
  out.caches.top = std::move(top.cache);
  return out;
}

SplitGradients SplitBackwardFromOutput(const SplitSpec& spec,
                                       const SplitParams& params,
                                       const SplitCaches& caches,
                                       const DenseMatrix& output_grad) {
  if (caches.bottoms.size() != spec.num_parties()) {
    throw std::invalid_argument("split backward: caches do not match spec");
  }
  models::BackwardResult top =
      models::BackpropFromOutput(spec.top, params.top, caches.top, output_grad);
  SplitGradients g;
  g.top = std::move(top.grad);
  g.cut_grads = SplitColumns(top.input_grad, spec.cut_widths());
  for (std::size_t i = 0; i < spec.num_parties(); ++i) {
    g.bottoms.push_back(models::BackpropFromOutput(spec.bottoms[i],
                                                   params.bottoms[i],
                                                   caches.bottoms[i],
                                                   g.cut_grads[i])
                            .grad);
  }
  return g;
}

SplitGradients SplitBackward(const SplitSpec& spec, const SplitParams& params,
                             const SplitCaches& caches,
                             const DenseMatrix& targets) {
  const auto outputs =
      models::Forward(spec.top, params.top, caches.top.raw_input).outputs;
  return SplitBackwardFromOutput(
      spec, params, caches, models::LossGradient(spec.top, outputs, targets));
}

Monolithic ToMonolithic(const SplitSpec& spec, const SplitParams& params) {
  spec.Validate();
  const std::size_t depth = spec.bottoms.front().num_layers();
  for (const auto& b : spec.bottoms) {
    if (b.num_layers() != depth || b.activation != spec.top.activation) {
      throw std::invalid_argument(
          "monolithic: bottoms must share depth and activation");
    }
  }
  Monolithic mono;
  mono.spec.activation = spec.top.activation;
  mono.spec.head = spec.top.head;
  for (std::size_t l = 0; l <= depth; ++l) {
    std::size_t w = 0;
    for (const auto& b : spec.bottoms) w += b.widths[l];
    mono.spec.widths.push_back(w);
  }
  mono.spec.widths.insert(mono.spec.widths.end(), spec.top.widths.begin() + 1,
                          spec.top.widths.end());
  mono.params = models::ZeroParams(mono.spec);

  // Bottom layers: block-diagonal weights, concatenated biases.
  for (std::size_t l = 0; l < depth; ++l) {
    const models::Segment& wseg = mono.params.segments[2 * l];
    const models::Segment& bseg = mono.params.segments[2 * l + 1];
    std::size_t r0 = 0;
    std::size_t c0 = 0;
    for (std::size_t i = 0; i < spec.num_parties(); ++i) {
      const ParamVector& pp = params.bottoms[i];
      const models::Segment& pw = pp.segments[2 * l];
      const models::Segment& pb = pp.segments[2 * l + 1];
      for (std::size_t r = 0; r < pw.rows; ++r) {
        for (std::size_t c = 0; c < pw.cols; ++c) {
          mono.params.values[wseg.offset + (r0 + r) * wseg.cols + c0 + c] =
              pp.values[pw.offset + r * pw.cols + c];
        }
      }
      for (std::size_t c = 0; c < pb.cols; ++c) {
        mono.params.values[bseg.offset + c0 + c] = pp.values[pb.offset + c];
      }
      r0 += pw.rows;
      c0 += pw.cols;
    }
  }
  // Top layers copy over unchanged.
  const std::size_t top_offset = mono.params.segments[2 * depth].offset;
  std::copy(params.top.values.begin(), params.top.values.end(),
            mono.params.values.begin() + static_cast<std::ptrdiff_t>(top_offset));
  return mono;
}

}  // namespace fedbench::splitnn
