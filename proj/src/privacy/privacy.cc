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

#include "fedbench/privacy/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fedbench/numkit/vector_ops.h"

namespace fedbench::privacy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

// log(exp(a) - exp(b)) for a >= b; rounding can put b marginally above a.
double LogSub(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

double LogErfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  // Asymptotic series; erfc underflows well before this matters.
  const double x2 = x * x;
  const double series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) -
                        15.0 / (8.0 * x2 * x2 * x2);
  return -x2 - std::log(x) - 0.5 * std::log(std::numbers::pi) +
         std::log(series);
}

// log A_alpha for integer alpha: sum_k C(alpha,k) (1-q)^(alpha-k) q^k
// exp((k^2 - k) / (2 sigma^2)).
double LogAInteger(double q, double sigma, int alpha) {
  double log_a = -kInf;
  double log_binom = 0.0;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  for (int k = 0; k <= alpha; ++k) {
    if (k > 0) {
      log_binom += std::log(static_cast<double>(alpha - k + 1)) -
                   std::log(static_cast<double>(k));
    }
    const double term = log_binom + k * log_q + (alpha - k) * log_1mq +
                        (static_cast<double>(k) * k - k) / (2.0 * sigma * sigma);
    log_a = LogAdd(log_a, term);
  }
  return log_a;
}

// log A_alpha for fractional alpha via the two-sided erfc expansion.
double LogAFractional(double q, double sigma, double alpha) {
  double log_a0 = -kInf;
  double log_a1 = -kInf;
  const double z0 = sigma * sigma * std::log(1.0 / q - 1.0) + 0.5;
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  double log_abs_coef = 0.0;
  bool coef_positive = true;
  for (int i = 0; i < 100000; ++i) {
    if (i > 0) {
      const double factor = (alpha - (i - 1)) / static_cast<double>(i);
      log_abs_coef += std::log(std::abs(factor));
      if (factor < 0) coef_positive = !coef_positive;
    }
    const double j = alpha - i;
    const double log_t0 = log_abs_coef + i * log_q + j * log_1mq;
    const double log_t1 = log_abs_coef + j * log_q + i * log_1mq;
    const double log_e0 =
        std::log(0.5) + LogErfc((i - z0) / (std::numbers::sqrt2 * sigma));
    const double log_e1 =
        std::log(0.5) + LogErfc((z0 - j) / (std::numbers::sqrt2 * sigma));
    const double log_s0 =
        log_t0 + (static_cast<double>(i) * i - i) / (2.0 * sigma * sigma) + log_e0;
    const double log_s1 = log_t1 + (j * j - j) / (2.0 * sigma * sigma) + log_e1;
    if (coef_positive) {
      log_a0 = LogAdd(log_a0, log_s0);
      log_a1 = LogAdd(log_a1, log_s1);
    } else {
      log_a0 = LogSub(log_a0, log_s0);
      log_a1 = LogSub(log_a1, log_s1);
    }
    if (std::max(log_s0, log_s1) < -30.0) break;
  }
  return LogAdd(log_a0, log_a1);
}

}  // namespace

void DpConfig::Validate() const {
  if (!(clip > 0.0)) throw std::invalid_argument("dp: clip must be > 0");
  if (noise_multiplier < 0.0) {
    throw std::invalid_argument("dp: noise multiplier must be >= 0");
  }
  if (noise_multiplier == 0.0 && !(target_epsilon > 0.0)) {
    throw std::invalid_argument(
        "dp: give a positive noise multiplier or target epsilon");
  }
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) {
    throw std::invalid_argument("dp: sampling rate must be in (0, 1]");
  }
  if (delta < 0.0 || delta >= 1.0) {
    throw std::invalid_argument("dp: delta must be in [0, 1)");
  }
  if (rounds == 0) throw std::invalid_argument("dp: rounds must be >= 1");
}

double DefaultDelta(std::size_t num_samples) {
  if (num_samples == 0) return 1e-5;
  return std::min(1e-5, 1.0 / static_cast<double>(num_samples));
}

std::vector<double> DpSanitize(std::span<const double> grad, double clip,
                               double sigma, numkit::SeededRng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("DpSanitize: sigma < 0");
  std::vector<double> out = numkit::ClipToNorm(grad, clip);
  if (sigma == 0.0) return out;
  const double stddev = sigma * clip;
  for (double& x : out) x += stddev * rng.Normal();
  return out;
}

const std::vector<double>& RdpOrders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o = {1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5};
    for (int a = 4; a <= 64; ++a) o.push_back(a);
    for (double a : {80.0, 96.0, 112.0, 128.0, 160.0, 192.0, 224.0, 256.0}) {
      o.push_back(a);
    }
    return o;
  }();
  return orders;
}

double SampledGaussianRdp(double q, double sigma, double alpha) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("SampledGaussianRdp: q must be in (0, 1]");
  }
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("SampledGaussianRdp: order must be > 1");
  }
  if (sigma <= 0.0) return kInf;
  if (q == 1.0) return alpha / (2.0 * sigma * sigma);
  const double log_a = alpha == std::floor(alpha)
                           ? LogAInteger(q, sigma, static_cast<int>(alpha))
                           : LogAFractional(q, sigma, alpha);
  return log_a / (alpha - 1.0);
}

double EpsilonFromRdp(std::span<const double> rdp, double delta) {
  const auto& orders = RdpOrders();
  if (rdp.size() != orders.size()) {
    throw std::invalid_argument("EpsilonFromRdp: curve/order size mismatch");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("EpsilonFromRdp: delta must be in (0, 1)");
  }
  double best = kInf;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const double eps = rdp[i] + std::log(1.0 / delta) / (orders[i] - 1.0);
    if (std::isfinite(eps)) best = std::min(best, eps);
  }
  return best;
}

double RdpEpsilon(double q, double sigma, std::size_t rounds, double delta) {
  const auto& orders = RdpOrders();
  std::vector<double> rdp(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    rdp[i] = static_cast<double>(rounds) * SampledGaussianRdp(q, sigma, orders[i]);
  }
  const double eps = EpsilonFromRdp(rdp, delta);
  if (!std::isfinite(eps)) {
    throw std::domain_error("RdpEpsilon: sigma " + std::to_string(sigma) +
                            " too small for a finite bound");
  }
  return eps;
}

double CalibrateSigma(double target_epsilon, double delta, double q,
                      std::size_t rounds) {
  if (!(target_epsilon > 0.0)) {
    throw std::invalid_argument("CalibrateSigma: target epsilon must be > 0");
  }
  auto eps_at = [&](double sigma) {
    try {
      return RdpEpsilon(q, sigma, rounds, delta);
    } catch (const std::domain_error&) {
      return kInf;
    }
  };
  constexpr double kMaxSigma = 1e6;
  double hi = 1.0;
  while (eps_at(hi) > target_epsilon) {
    hi *= 2.0;
    if (hi > kMaxSigma) {
      throw std::runtime_error("CalibrateSigma: no sigma <= 1e6 reaches eps " +
                               std::to_string(target_epsilon));
    }
  }
  double lo = hi / 2.0;
  while (eps_at(lo) <= target_epsilon) {
    hi = lo;
    lo /= 2.0;
    if (lo < 1e-6) return hi;
  }
  while ((hi - lo) / hi > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (eps_at(mid) <= target_epsilon) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

PrivacyLedger::PrivacyLedger(double delta)
    : delta_(delta), rdp_(RdpOrders().size(), 0.0) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyLedger: delta must be in (0, 1)");
  }
}

double PrivacyLedger::Record(double q, double sigma) {
  const auto& orders = RdpOrders();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    rdp_[i] += SampledGaussianRdp(q, sigma, orders[i]);
  }
  const double eps = Epsilon();
  rows_.push_back({rows_.size() + 1, q, sigma, eps});
  return eps;
}

double PrivacyLedger::Epsilon() const { return EpsilonFromRdp(rdp_, delta_); }

}  // namespace fedbench::privacy
