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

#ifndef FEDBENCH_COMPRESSION_COMPRESSION_H_
#define FEDBENCH_COMPRESSION_COMPRESSION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fedbench/models/param_vector.h"
#include "fedbench/numkit/rng.h"

namespace fedbench::compression {

// Wire encodings (all little-endian):
//   raw:      u64 length, f32 values
//   sparse:   u64 original length, u64 count, u64 indices, f32 values
//   low-rank: u64 original length, u64 factor count, u64 block count, then
//             per factor: u64 offset, u32 rows, u32 cols, u32 rank,
//             f32 P (rows x rank), f32 Q (cols x rank); per raw block:
//             u64 offset, u64 count, f32 values.
// Values stay double in memory; only the byte accounting and Serialize use
// the 32-bit width.
inline constexpr std::uint64_t kValueBytes = 4;
inline constexpr std::uint64_t kIndexBytes = 8;

enum class Method { kNone, kTopK, kRandK, kLowRank };

Method ParseMethod(std::string_view name);
std::string_view ToString(Method m);

struct LowRankFactor {
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  std::vector<double> p;  // rows x rank
  std::vector<double> q;  // cols x rank, orthonormal columns
};

struct DenseBlock {
  std::size_t offset = 0;
  std::vector<double> values;
};

struct CompressedGrad {
  Method method = Method::kNone;
  std::size_t original_length = 0;
  // Sparse: strictly increasing indices with matching values.
  std::vector<std::uint64_t> indices;
  std::vector<double> values;
  // Low-rank.
  std::vector<LowRankFactor> factors;
  std::vector<DenseBlock> raw_blocks;
  std::uint64_t wire_bytes = 0;
};

std::uint64_t RawWireBytes(std::size_t length);
std::uint64_t SparseWireBytes(std::size_t count);

std::vector<double> Decompress(const CompressedGrad& c);
std::vector<std::uint8_t> Serialize(const CompressedGrad& c);

// Uncompressed payload, for uniform accounting.
CompressedGrad Identity(std::span<const double> g);

// ceil(k_fraction * len), at least 1 for non-empty input.
std::size_t KeepCount(std::size_t length, double k_fraction);

// Largest-magnitude entries; ties go to the lower index.
CompressedGrad TopK(std::span<const double> g, double k_fraction);

// Uniform subset without replacement. With rescale, kept values are
// multiplied by len / count so the decompressed vector is unbiased.
CompressedGrad RandK(std::span<const double> g, double k_fraction,
                     numkit::SeededRng& rng, bool rescale = false);

// Per-matrix warm-start state for low-rank compression.
struct LowRankState {
  // Previous P per segment index (empty until first use).
  std::vector<std::vector<double>> previous_p;
};

// One power iteration per matrix segment: Q = orthonormalize(M^T P_prev),
// P = M Q, reconstruction P Q^T. P_prev starts Gaussian and is carried in
// `state`. Vector segments are sent raw.
CompressedGrad LowRank(std::span<const double> g,
                       const std::vector<models::Segment>& layout,
                       std::size_t rank, LowRankState& state,
                       numkit::SeededRng& rng);

// Modified Gram-Schmidt on the columns of a (rows x cols) row-major matrix.
// Columns that collapse to zero are left zero.
void Orthonormalize(std::vector<double>& m, std::size_t rows, std::size_t cols);

double WireRatio(std::uint64_t raw_bytes, std::uint64_t compressed_bytes);

// Overall uplink saving once the extra rounds a compressed run needs are
// counted: per_round_ratio * baseline_rounds / rounds.
double EndToEndRatio(double per_round_ratio, double rounds,
                     double baseline_rounds);

// Carries the compression residual into the next round, damped.
class ErrorFeedback {
 public:
  explicit ErrorFeedback(double damping = 0.5) : damping_(damping) {}

  // g + residual.
  std::vector<double> Apply(std::span<const double> g) const;
  // residual <- damping * (effective - decompressed).
  void Update(std::span<const double> effective,
              std::span<const double> decompressed);

  const std::vector<double>& residual() const { return residual_; }
  double damping() const { return damping_; }

 private:
  double damping_;
  std::vector<double> residual_;
};

struct CompressionConfig {
  Method method = Method::kNone;
  double k_fraction = 0.01;
  std::size_t rank = 3;
  bool error_feedback = true;
  double damping = 0.5;
  bool randk_rescale = false;

  void Validate() const;
};

// A client's uplink compressor with its private error-feedback and
// warm-start state.
class ClientCompressor {
 public:
  explicit ClientCompressor(CompressionConfig config);

  CompressedGrad Compress(std::span<const double> g,
                          const std::vector<models::Segment>& layout,
                          numkit::SeededRng& rng);
  const ErrorFeedback& feedback() const { return feedback_; }

 private:
  CompressionConfig config_;
  ErrorFeedback feedback_;
  LowRankState lowrank_;
};

}  // namespace fedbench::compression

#endif  // FEDBENCH_COMPRESSION_COMPRESSION_H_
