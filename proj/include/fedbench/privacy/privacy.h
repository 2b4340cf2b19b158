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

#ifndef FEDBENCH_PRIVACY_PRIVACY_H_
#define FEDBENCH_PRIVACY_PRIVACY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "fedbench/numkit/rng.h"

namespace fedbench::privacy {

struct DpConfig {
  double clip = 0.1;
  double noise_multiplier = 0.0;  // sigma; 0 means calibrate from target
  double target_epsilon = 0.0;
  double delta = 0.0;             // 0 means DefaultDelta(N)
  double sampling_rate = 1.0;     // q
  std::size_t rounds = 300;       // T

  void Validate() const;
};

// min(1e-5, 1/N).
double DefaultDelta(std::size_t num_samples);

// Clips the whole vector to norm `clip` and adds N(0, (sigma * clip)^2) to
// every coordinate. sigma = 0 returns the clipped vector.
std::vector<double> DpSanitize(std::span<const double> grad, double clip,
                               double sigma, numkit::SeededRng& rng);

// Renyi orders used by the accountant, 1.5 up to 256.
const std::vector<double>& RdpOrders();

// RDP of one application of the sampled Gaussian mechanism (sampling rate q,
// noise multiplier sigma) at order alpha. q = 1 is the plain Gaussian,
// alpha / (2 sigma^2).
double SampledGaussianRdp(double q, double sigma, double alpha);

// Tightest epsilon over the order grid for a cumulative RDP curve.
double EpsilonFromRdp(std::span<const double> rdp, double delta);

// epsilon after T rounds; min over orders of T * RDP(alpha) +
// log(1/delta) / (alpha - 1). Throws std::domain_error when no order gives
// a finite bound.
double RdpEpsilon(double q, double sigma, std::size_t rounds, double delta);

// Smallest sigma (to 1e-3 relative) with RdpEpsilon <= target_epsilon.
// Throws std::runtime_error when no sigma up to 1e6 suffices.
double CalibrateSigma(double target_epsilon, double delta, double q,
                      std::size_t rounds);

struct PrivacyRow {
  std::size_t round = 0;
  double q = 0.0;
  double sigma = 0.0;
  double epsilon = 0.0;
};

// Per-round (q, sigma) history composed on the fixed order grid.
class PrivacyLedger {
 public:
  explicit PrivacyLedger(double delta);

  // Records one round and returns the epsilon spent so far.
  double Record(double q, double sigma);
  double Epsilon() const;
  double delta() const { return delta_; }
  const std::vector<double>& rdp() const { return rdp_; }
  const std::vector<PrivacyRow>& rows() const { return rows_; }

 private:
  double delta_;
  std::vector<double> rdp_;
  std::vector<PrivacyRow> rows_;
};

}  // namespace fedbench::privacy

#endif  // FEDBENCH_PRIVACY_PRIVACY_H_
