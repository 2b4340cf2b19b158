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

#ifndef FEDBENCH_NUMKIT_RNG_H_
#define FEDBENCH_NUMKIT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <vector>

namespace fedbench::numkit {

// Counter-based generator: draw i is a keyed bijective mix of (key, i), so a
// stream is fully described by its key and position. Keys for sub-streams are
// derived by hashing (seed, ids...), which lets every client own an
// independent stream for (experiment seed, client id, round) without sharing
// state. All transforms below use only integer arithmetic and libm basics, so
// sequences are identical across runs and platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  // Stream keyed by seed and an ordered list of ids.
  static SeededRng Derive(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> ids);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }

  std::uint64_t NextU64();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on (0, 1); never returns 0.
  double UniformOpen();
  // Unbiased integer in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);
  double Normal();
  double Normal(double mean, double stddev);
  // Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
  double Gamma(double shape);
  // log of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
  // draw itself underflows.
  double LogGamma(double shape);

  // Fisher-Yates permutation of [0, n).
  std::vector<std::size_t> Permutation(std::size_t n);
  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_normal_;
};

// SplitMix64 finalizer; exposed for hashing seeds and config fingerprints.
std::uint64_t Mix64(std::uint64_t x);

}  // namespace fedbench::numkit

#endif  // FEDBENCH_NUMKIT_RNG_H_
