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

#include "fedbench/compression/compression.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fedbench::compression {

namespace {

constexpr std::uint64_t kLowRankHeader = 24;
constexpr std::uint64_t kFactorHeader = 20;
constexpr std::uint64_t kBlockHeader = 16;

class ByteWriter {
 public:
  void U64(std::uint64_t v) { Put(v, 8); }
  void U32(std::uint32_t v) { Put(v, 4); }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  std::vector<std::uint8_t> Take() { return std::move(bytes_); }

 private:
  void Put(std::uint64_t v, int width) {
    for (int b = 0; b < width; ++b) {
      bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
  }
  std::vector<std::uint8_t> bytes_;
};

CompressedGrad SparseFrom(std::span<const double> g,
                          std::vector<std::uint64_t> indices, Method method,
                          double value_scale) {
  std::sort(indices.begin(), indices.end());
  CompressedGrad c;
  c.method = method;
  c.original_length = g.size();
  c.values.reserve(indices.size());
  for (std::uint64_t i : indices) c.values.push_back(g[i] * value_scale);
  c.indices = std::move(indices);
  c.wire_bytes = SparseWireBytes(c.indices.size());
  return c;
}

std::uint64_t LowRankWireBytes(const CompressedGrad& c) {
  std::uint64_t bytes = kLowRankHeader;
  for (const auto& f : c.factors) {
    bytes += kFactorHeader + kValueBytes * (f.rows + f.cols) * f.rank;
  }
  for (const auto& b : c.raw_blocks) {
    bytes += kBlockHeader + kValueBytes * b.values.size();
  }
  return bytes;
}

}  // namespace

Method ParseMethod(std::string_view name) {
  if (name == "none") return Method::kNone;
  if (name == "topk") return Method::kTopK;
  if (name == "randk") return Method::kRandK;
  if (name == "lowrank") return Method::kLowRank;
  throw std::invalid_argument("unknown compression method '" +
                              std::string(name) + "'");
}

std::string_view ToString(Method m) {
  switch (m) {
    case Method::kNone:
      return "none";
    case Method::kTopK:
      return "topk";
    case Method::kRandK:
      return "randk";
    case Method::kLowRank:
      return "lowrank";
  }
  return "?";
}

std::uint64_t RawWireBytes(std::size_t length) {
  return 8 + kValueBytes * length;
}

std::uint64_t SparseWireBytes(std::size_t count) {
  return 16 + (kIndexBytes + kValueBytes) * count;
}

std::vector<double> Decompress(const CompressedGrad& c) {
  std::vector<double> out(c.original_length, 0.0);
  switch (c.method) {
    case Method::kNone:
      std::copy(c.values.begin(), c.values.end(), out.begin());
      break;
    case Method::kTopK:
    case Method::kRandK:
      for (std::size_t i = 0; i < c.indices.size(); ++i) {
        out[c.indices[i]] = c.values[i];
      }
      break;
    case Method::kLowRank:
      for (const auto& f : c.factors) {
        for (std::size_t r = 0; r < f.rows; ++r) {
          for (std::size_t col = 0; col < f.cols; ++col) {
            double acc = 0.0;
            for (std::size_t k = 0; k < f.rank; ++k) {
              acc += f.p[r * f.rank + k] * f.q[col * f.rank + k];
            }
            out[f.offset + r * f.cols + col] = acc;
          }
        }
      }
      for (const auto& b : c.raw_blocks) {
        std::copy(b.values.begin(), b.values.end(), out.begin() + b.offset);
      }
      break;
  }
  return out;
}

std::vector<std::uint8_t> Serialize(const CompressedGrad& c) {
  ByteWriter w;
  switch (c.method) {
    case Method::kNone:
      w.U64(c.values.size());
      for (double v : c.values) w.F32(v);
      break;
    case Method::kTopK:
    case Method::kRandK:
      w.U64(c.original_length);
      w.U64(c.indices.size());
      for (std::uint64_t i : c.indices) w.U64(i);
      for (double v : c.values) w.F32(v);
      break;
    case Method::kLowRank:
      w.U64(c.original_length);
      w.U64(c.factors.size());
      w.U64(c.raw_blocks.size());
      for (const auto& f : c.factors) {
        w.U64(f.offset);
        w.U32(static_cast<std::uint32_t>(f.rows));
        w.U32(static_cast<std::uint32_t>(f.cols));
        w.U32(static_cast<std::uint32_t>(f.rank));
        for (double v : f.p) w.F32(v);
        for (double v : f.q) w.F32(v);
      }
      for (const auto& b : c.raw_blocks) {
        w.U64(b.offset);
        w.U64(b.values.size());
        for (double v : b.values) w.F32(v);
      }
      break;
  }
  return w.Take();
}

CompressedGrad Identity(std::span<const double> g) {
  CompressedGrad c;
  c.method = Method::kNone;
  c.original_length = g.size();
  c.values.assign(g.begin(), g.end());
  c.wire_bytes = RawWireBytes(g.size());
  return c;
}

std::size_t KeepCount(std::size_t length, double k_fraction) {
  if (!(k_fraction > 0.0 && k_fraction <= 1.0)) {
    throw std::invalid_argument("k fraction must be in (0, 1]");
  }
  if (length == 0) return 0;
  // Guard the ceiling against representation error (0.01 * 300 = 3.0000001).
  const double exact = k_fraction * static_cast<double>(length);
  auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9 * exact));
  return std::clamp<std::size_t>(count, 1, length);
}

CompressedGrad TopK(std::span<const double> g, double k_fraction) {
  const std::size_t keep = KeepCount(g.size(), k_fraction);
  std::vector<std::uint64_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  auto before = [&g](std::uint64_t a, std::uint64_t b) {
    const double ma = std::abs(g[a]);
    const double mb = std::abs(g[b]);
    return ma != mb ? ma > mb : a < b;
  };
  std::nth_element(order.begin(), order.begin() + keep, order.end(), before);
  order.resize(keep);
  return SparseFrom(g, std::move(order), Method::kTopK, 1.0);
}

CompressedGrad RandK(std::span<const double> g, double k_fraction,
                     numkit::SeededRng& rng, bool rescale) {
  const std::size_t keep = KeepCount(g.size(), k_fraction);
  std::vector<std::uint64_t> pool(g.size());
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(g.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(keep);
  const double scale =
      rescale && keep > 0 ? static_cast<double>(g.size()) / keep : 1.0;
  return SparseFrom(g, std::move(pool), Method::kRandK, scale);
}

void Orthonormalize(std::vector<double>& m, std::size_t rows,
                    std::size_t cols) {
  auto column_norm = [&](std::size_t c) {
    double acc = 0.0;
    for (std::size_t r = 0; r < rows; ++r) acc += m[r * cols + c] * m[r * cols + c];
    return std::sqrt(acc);
  };
  for (std::size_t c = 0; c < cols; ++c) {
    const double original = column_norm(c);
    for (std::size_t prev = 0; prev < c; ++prev) {
      double dot = 0.0;
      for (std::size_t r = 0; r < rows; ++r) {
        dot += m[r * cols + c] * m[r * cols + prev];
      }
      for (std::size_t r = 0; r < rows; ++r) {
        m[r * cols + c] -= dot * m[r * cols + prev];
      }
    }
    const double norm = column_norm(c);
    // A column that lost almost all of its length was dependent on the
    // earlier ones; what is left is rounding noise.
    if (original == 0.0 || norm <= 1e-10 * original) {
      for (std::size_t r = 0; r < rows; ++r) m[r * cols + c] = 0.0;
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) m[r * cols + c] /= norm;
  }
}

CompressedGrad LowRank(std::span<const double> g,
                       const std::vector<models::Segment>& layout,
                       std::size_t rank, LowRankState& state,
                       numkit::SeededRng& rng) {
  if (rank == 0) throw std::invalid_argument("LowRank: rank must be >= 1");
  CompressedGrad c;
  c.method = Method::kLowRank;
  c.original_length = g.size();
  state.previous_p.resize(layout.size());
  std::size_t covered = 0;
  for (std::size_t s = 0; s < layout.size(); ++s) {
    const models::Segment& seg = layout[s];
    if (seg.offset + seg.size() > g.size()) {
      throw std::invalid_argument("LowRank: layout exceeds gradient length");
    }
    covered += seg.size();
    auto block = g.subspan(seg.offset, seg.size());
    if (!seg.is_matrix()) {
      c.raw_blocks.push_back({seg.offset, {block.begin(), block.end()}});
      continue;
    }
    const std::size_t m = seg.rows;
    const std::size_t n = seg.cols;
    const std::size_t r = std::min({rank, m, n});
    std::vector<double>& prev = state.previous_p[s];
    if (prev.size() != m * r) {
      prev.resize(m * r);
      for (double& x : prev) x = rng.Normal();
    }
    // Q = M^T P_prev  (n x r)
    LowRankFactor f;
    f.offset = seg.offset;
    f.rows = m;
    f.cols = n;
    f.rank = r;
    f.q.assign(n * r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double mij = block[i * n + j];
        if (mij == 0.0) continue;
        for (std::size_t k = 0; k < r; ++k) f.q[j * r + k] += mij * prev[i * r + k];
      }
    }
    Orthonormalize(f.q, n, r);
    // P = M Q  (m x r)
    f.p.assign(m * r, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double mij = block[i * n + j];
        if (mij == 0.0) continue;
        for (std::size_t k = 0; k < r; ++k) f.p[i * r + k] += mij * f.q[j * r + k];
      }
    }
    // Keep the warm start usable even if this round's matrix was zero.
    if (std::any_of(f.p.begin(), f.p.end(), [](double x) { return x != 0.0; })) {
      prev = f.p;
    }
    c.factors.push_back(std::move(f));
  }
  if (covered != g.size()) {
    throw std::invalid_argument("LowRank: layout does not cover the gradient");
  }
  c.wire_bytes = LowRankWireBytes(c);
  return c;
}

double WireRatio(std::uint64_t raw_bytes, std::uint64_t compressed_bytes) {
  if (compressed_bytes == 0) {
    throw std::invalid_argument("WireRatio: compressed size is zero");
  }
  if (raw_bytes == 0) throw std::invalid_argument("WireRatio: raw size is zero");
  return static_cast<double>(raw_bytes) / static_cast<double>(compressed_bytes);
}

double EndToEndRatio(double per_round_ratio, double rounds,
                     double baseline_rounds) {
  if (!(rounds > 0.0) || !(baseline_rounds > 0.0)) {
    throw std::invalid_argument("EndToEndRatio: round counts must be > 0");
  }
  return per_round_ratio * baseline_rounds / rounds;
}

std::vector<double> ErrorFeedback::Apply(std::span<const double> g) const {
  std::vector<double> out(g.begin(), g.end());
  if (residual_.empty()) return out;
  if (residual_.size() != g.size()) {
    throw std::invalid_argument("ErrorFeedback: shape mismatch");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += residual_[i];
  return out;
}

void ErrorFeedback::Update(std::span<const double> effective,
                           std::span<const double> decompressed) {
  if (effective.size() != decompressed.size()) {
    throw std::invalid_argument("ErrorFeedback: shape mismatch");
  }
  residual_.resize(effective.size());
  for (std::size_t i = 0; i < effective.size(); ++i) {
    residual_[i] = damping_ * (effective[i] - decompressed[i]);
  }
}

void CompressionConfig::Validate() const {
  if (method == Method::kTopK || method == Method::kRandK) {
    if (!(k_fraction > 0.0 && k_fraction <= 1.0)) {
      throw std::invalid_argument("compression: k fraction must be in (0, 1]");
    }
  }
  if (method == Method::kLowRank && rank == 0) {
    throw std::invalid_argument("compression: rank must be >= 1");
  }
  if (!(damping >= 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("compression: damping must be in [0, 1]");
  }
}

ClientCompressor::ClientCompressor(CompressionConfig config)
    : config_(config), feedback_(config.damping) {
  config_.Validate();
}

CompressedGrad ClientCompressor::Compress(
    std::span<const double> g, const std::vector<models::Segment>& layout,
    numkit::SeededRng& rng) {
  const bool use_ef = config_.error_feedback && config_.method != Method::kNone;
  const std::vector<double> effective =
      use_ef ? feedback_.Apply(g) : std::vector<double>(g.begin(), g.end());
  CompressedGrad c;
  switch (config_.method) {
    case Method::kNone:
      c = Identity(effective);
      break;
    case Method::kTopK:
      c = TopK(effective, config_.k_fraction);
      break;
    case Method::kRandK:
      c = RandK(effective, config_.k_fraction, rng, config_.randk_rescale);
      break;
    case Method::kLowRank:
      c = LowRank(effective, layout, config_.rank, lowrank_, rng);
      break;
  }
  if (use_ef) feedback_.Update(effective, Decompress(c));
  return c;
}

}  // namespace fedbench::compression
