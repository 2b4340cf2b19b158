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

#ifndef FEDBENCH_SECAGG_SECURE_AGG_H_
#define FEDBENCH_SECAGG_SECURE_AGG_H_

// Additive secret sharing for secure aggregation.
//
// Client i splits its encoded vector g_i into K parts. Parts 1..K-1 are
// uniform on [0, Q) and part j is sent to client (i + j) mod N; part K is
// (Q + g_i - sum of the others) mod Q and stays local. Each client uploads
// g_i' = part K + every part it received, and the server's sum of the g_i'
// equals the sum of the g_i mod Q.
//
// With only two clients the peer can subtract its own contribution from the
// aggregate, so the scheme protects against a curious server only.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fedbench/numkit/rng.h"

namespace fedbench::secagg {

using RingVector = std::vector<std::uint64_t>;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

// Fixed-point mapping of reals into Z_Q, sized for n_parties summands.
struct FixedCodec {
  double scale = 1.0 / static_cast<double>(1 << 20);
  std::uint64_t modulus = kMersenne61;
  std::size_t n_parties = 1;

  void Validate() const;
  // Largest |round(v / scale)| one party may contribute.
  std::uint64_t MaxMagnitude() const;
};

std::uint64_t AddMod(std::uint64_t a, std::uint64_t b, std::uint64_t q);
std::uint64_t SubMod(std::uint64_t a, std::uint64_t b, std::uint64_t q);

// round(v / scale) mod Q. Throws std::range_error when a value would risk
// wraparound of the n_parties-term sum.
RingVector EncodeFixed(std::span<const double> values, const FixedCodec& codec);

// Centered lift of ring values back to reals. `summands` is how many
// encoded vectors were added together; a lifted magnitude beyond
// summands * MaxMagnitude() means the sum wrapped and raises
// std::range_error.
std::vector<double> DecodeFixed(std::span<const std::uint64_t> values,
                                const FixedCodec& codec, std::size_t summands);

struct ShareBundle {
  std::size_t owner = 0;
  std::size_t n_clients = 0;
  // parts[0..K-2] are sent out; parts[K-1] stays with the owner.
  std::vector<RingVector> parts;

  std::size_t num_parts() const { return parts.size(); }
  // Recipient of parts[j - 1] for j in [1, K-1].
  std::size_t Recipient(std::size_t j) const { return (owner + j) % n_clients; }
  const RingVector& kept() const { return parts.back(); }
};

ShareBundle MakeShares(std::span<const std::uint64_t> encoded, std::size_t owner,
                       std::size_t n_clients, std::size_t num_parts,
                       std::uint64_t modulus, numkit::SeededRng& rng);

// g' = kept + sum(received) mod Q. `expected_received` is K - 1.
RingVector CombineShares(std::span<const std::uint64_t> kept,
                         const std::vector<RingVector>& received,
                         std::size_t expected_received, std::uint64_t modulus);

// Sum of all clients' masked vectors mod Q, decoded.
std::vector<double> SecureAggregate(const std::vector<RingVector>& masked,
                                    const FixedCodec& codec);

// Wire format: u64 little-endian element count, then each element as u64
// little-endian.
std::vector<std::uint8_t> SerializeRing(std::span<const std::uint64_t> values);
RingVector DeserializeRing(std::span<const std::uint8_t> bytes);
std::uint64_t RingWireBytes(std::size_t length);

// Full protocol over in-memory clients, used by the engine and tests.
struct SecureSumResult {
  std::vector<double> sum;
  // Per client: bytes of shares sent to peers and of the masked upload.
  std::uint64_t share_bytes_per_client = 0;
  std::uint64_t upload_bytes_per_client = 0;
};

SecureSumResult SecureSum(const std::vector<std::vector<double>>& inputs,
                          std::size_t num_parts, const FixedCodec& codec,
                          std::uint64_t seed, std::uint64_t round);

}  // namespace fedbench::secagg

#endif  // FEDBENCH_SECAGG_SECURE_AGG_H_
