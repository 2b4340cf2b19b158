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

#include "fedbench/numkit/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fedbench::numkit {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}  // namespace

std::uint64_t Mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

SeededRng::SeededRng(std::uint64_t seed)
    : seed_(seed), key_(Mix64(seed + kGolden)) {}

SeededRng SeededRng::Derive(std::uint64_t seed,
                            std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = Mix64(seed ^ 0xD1B54A32D192ED03ULL);
  for (std::uint64_t id : ids) h = Mix64(h + kGolden * (id + 1));
  SeededRng rng(seed);
  rng.key_ = h;
  return rng;
}

std::uint64_t SeededRng::NextU64() {
  ++counter_;
  return Mix64(key_ + counter_ * kGolden);
}

double SeededRng::Uniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double SeededRng::UniformOpen() {
  return (static_cast<double>(NextU64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t SeededRng::Below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SeededRng::Below: bound = 0");
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = NextU64();
  unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = NextU64();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SeededRng::Normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = UniformOpen();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

double SeededRng::Normal(double mean, double stddev) {
  return mean + stddev * Normal();
}

double SeededRng::Gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("Gamma: shape must be > 0");
  if (shape < 1.0) {
    return std::exp(LogGamma(shape));
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = Normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = UniformOpen();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double SeededRng::LogGamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("Gamma: shape must be > 0");
  if (shape >= 1.0) return std::log(Gamma(shape));
  // G(a) = G(a + 1) * U^(1/a).
  const double boosted = Gamma(shape + 1.0);
  return std::log(boosted) + std::log(UniformOpen()) / shape;
}

std::vector<std::size_t> SeededRng::Permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  Shuffle(p);
  return p;
}

}  // namespace fedbench::numkit
