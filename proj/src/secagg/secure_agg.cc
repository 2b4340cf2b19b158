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

#include "fedbench/secagg/secure_agg.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fedbench::secagg {

void FixedCodec::Validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("FixedCodec: scale must be > 0");
  }
  if (modulus < 3 || modulus > (std::uint64_t{1} << 62)) {
    throw std::invalid_argument("FixedCodec: modulus must be in [3, 2^62]");
  }
  if (n_parties == 0) {
    throw std::invalid_argument("FixedCodec: n_parties must be >= 1");
  }
}

std::uint64_t FixedCodec::MaxMagnitude() const {
  return (modulus - 1) / (2 * n_parties);
}

std::uint64_t AddMod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  const std::uint64_t s = a + b;  // a, b < q <= 2^62, no overflow
  return s >= q ? s - q : s;
}

std::uint64_t SubMod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return a >= b ? a - b : a + q - b;
}

RingVector EncodeFixed(std::span<const double> values,
                       const FixedCodec& codec) {
  codec.Validate();
  const std::uint64_t bound = codec.MaxMagnitude();
  RingVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double scaled = values[i] / codec.scale;
    if (!std::isfinite(scaled) ||
        std::abs(scaled) >= static_cast<double>(bound)) {
      throw std::range_error("EncodeFixed: |value| " +
                             std::to_string(values[i]) +
                             " exceeds the wraparound-safe bound");
    }
    const std::int64_t r = std::llround(scaled);
    out[i] = r >= 0 ? static_cast<std::uint64_t>(r)
                    : codec.modulus - static_cast<std::uint64_t>(-r);
    if (out[i] == codec.modulus) out[i] = 0;
  }
  return out;
}

std::vector<double> DecodeFixed(std::span<const std::uint64_t> values,
                                const FixedCodec& codec,
                                std::size_t summands) {
  codec.Validate();
  const std::uint64_t limit = codec.MaxMagnitude() * summands;
  const std::uint64_t half = codec.modulus / 2;
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t x = values[i];
    if (x >= codec.modulus) {
      throw std::range_error("DecodeFixed: value not reduced mod Q");
    }
    const bool negative = x > half;
    const std::uint64_t magnitude = negative ? codec.modulus - x : x;
    if (magnitude > limit) {
      throw std::range_error("DecodeFixed: aggregate wrapped around modulus");
    }
    const double m = static_cast<double>(magnitude) * codec.scale;
    out[i] = negative ? -m : m;
  }
  return out;
}

ShareBundle MakeShares(std::span<const std::uint64_t> encoded,
                       std::size_t owner, std::size_t n_clients,
                       std::size_t num_parts, std::uint64_t modulus,
                       numkit::SeededRng& rng) {
  if (num_parts < 2 || num_parts > n_clients) {
    throw std::invalid_argument("MakeShares: need 2 <= K <= N, got K=" +
                                std::to_string(num_parts) +
                                " N=" + std::to_string(n_clients));
  }
  if (owner >= n_clients) throw std::invalid_argument("MakeShares: bad owner");
  ShareBundle bundle;
  bundle.owner = owner;
  bundle.n_clients = n_clients;
  bundle.parts.assign(num_parts, RingVector(encoded.size()));
  RingVector& last = bundle.parts.back();
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] >= modulus) {
      throw std::invalid_argument("MakeShares: input not reduced mod Q");
    }
    std::uint64_t remaining = encoded[i];
    for (std::size_t j = 0; j + 1 < num_parts; ++j) {
      const std::uint64_t r = rng.Below(modulus);
      bundle.parts[j][i] = r;
      remaining = SubMod(remaining, r, modulus);
    }
    last[i] = remaining;
  }
  return bundle;
}

RingVector CombineShares(std::span<const std::uint64_t> kept,
                         const std::vector<RingVector>& received,
                         std::size_t expected_received,
                         std::uint64_t modulus) {
  if (received.size() != expected_received) {
    throw std::invalid_argument("CombineShares: expected " +
                                std::to_string(expected_received) +
                                " received parts, got " +
                                std::to_string(received.size()));
  }
  RingVector out(kept.begin(), kept.end());
  for (const RingVector& part : received) {
    if (part.size() != out.size()) {
      throw std::invalid_argument("CombineShares: part length mismatch");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = AddMod(out[i], part[i], modulus);
    }
  }
  return out;
}

std::vector<double> SecureAggregate(const std::vector<RingVector>& masked,
                                    const FixedCodec& codec) {
  if (masked.empty()) {
    throw std::invalid_argument("SecureAggregate: no client reports");
  }
  RingVector total(masked.front().size(), 0);
  for (const RingVector& m : masked) {
    if (m.size() != total.size()) {
      throw std::invalid_argument("SecureAggregate: length mismatch");
    }
    for (std::size_t i = 0; i < total.size(); ++i) {
      total[i] = AddMod(total[i], m[i], codec.modulus);
    }
  }
  return DecodeFixed(total, codec, masked.size());
}

std::vector<std::uint8_t> SerializeRing(std::span<const std::uint64_t> values) {
  std::vector<std::uint8_t> out;
  out.reserve(RingWireBytes(values.size()));
  auto put = [&out](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  };
  put(values.size());
  for (std::uint64_t v : values) put(v);
  return out;
}

RingVector DeserializeRing(std::span<const std::uint8_t> bytes) {
  auto get = [&bytes](std::size_t at) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= std::uint64_t{bytes[at + b]} << (8 * b);
    return v;
  };
  if (bytes.size() < 8) throw std::invalid_argument("DeserializeRing: short");
  const std::uint64_t n = get(0);
  if (bytes.size() != RingWireBytes(n)) {
    throw std::invalid_argument("DeserializeRing: length prefix mismatch");
  }
  RingVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = get(8 + 8 * i);
  return out;
}

std::uint64_t RingWireBytes(std::size_t length) { return 8 + 8 * length; }

SecureSumResult SecureSum(const std::vector<std::vector<double>>& inputs,
                          std::size_t num_parts, const FixedCodec& codec,
                          std::uint64_t seed, std::uint64_t round) {
  const std::size_t n = inputs.size();
  if (n == 0) throw std::invalid_argument("SecureSum: no inputs");
  const std::size_t len = inputs.front().size();
  std::vector<ShareBundle> bundles;
  bundles.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (inputs[i].size() != len) {
      throw std::invalid_argument("SecureSum: input length mismatch");
    }
    numkit::SeededRng rng = numkit::SeededRng::Derive(seed, {0x5EC, round, i});
    bundles.push_back(MakeShares(EncodeFixed(inputs[i], codec), i, n,
                                 num_parts, codec.modulus, rng));
  }
  std::vector<std::vector<RingVector>> inbox(n);
  for (const ShareBundle& b : bundles) {
    for (std::size_t j = 1; j < num_parts; ++j) {
      inbox[b.Recipient(j)].push_back(b.parts[j - 1]);
    }
  }
  std::vector<RingVector> masked;
  masked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    masked.push_back(CombineShares(bundles[i].kept(), inbox[i], num_parts - 1,
                                   codec.modulus));
  }
  SecureSumResult result;
  result.sum = SecureAggregate(masked, codec);
  result.share_bytes_per_client = (num_parts - 1) * RingWireBytes(len);
  result.upload_bytes_per_client = RingWireBytes(len);
  return result;
}

}  // namespace fedbench::secagg
