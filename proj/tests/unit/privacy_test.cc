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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fedbench/numkit/rng.h"
#include "fedbench/numkit/vector_ops.h"
#include "fedbench/privacy/privacy.h"
#include "gtest/gtest.h"

namespace fedbench::privacy {
namespace {

using numkit::SeededRng;

// Renyi divergence of the subsampled Gaussian mixture against N(0, sigma^2),
// integrated directly on a fine grid.
double NumericSubsampledRdp(double q, double sigma, double alpha) {
  auto log_normal = [sigma](double z, double mean) {
    const double u = (z - mean) / sigma;
    return -0.5 * u * u - std::log(sigma * std::sqrt(2 * std::numbers::pi));
  };
  const double lo = -12.0 * sigma;
  const double hi = 1.0 + 12.0 * sigma + alpha / sigma;
  constexpr int kPoints = 400000;
  const double h = (hi - lo) / kPoints;
  double sum = 0.0;
  for (int i = 0; i <= kPoints; ++i) {
    const double z = lo + i * h;
    const double l0 = log_normal(z, 0.0);
    const double l1 = log_normal(z, 1.0);
    const double lmix = std::log((1 - q) * std::exp(l0) + q * std::exp(l1));
    const double f = std::exp(alpha * lmix + (1 - alpha) * l0);
    sum += (i == 0 || i == kPoints) ? 0.5 * f : f;
  }
  return std::log(sum * h) / (alpha - 1);
}

TEST(DefaultDeltaTest, CapsAtOneOverN) {
  EXPECT_DOUBLE_EQ(DefaultDelta(1000), 1e-5);
  EXPECT_DOUBLE_EQ(DefaultDelta(100000), 1e-5);
  EXPECT_DOUBLE_EQ(DefaultDelta(1'000'000), 1e-6);
}

TEST(SanitizeTest, ZeroSigmaReturnsClippedGradient) {
  SeededRng rng(1);
  std::vector<double> g = {3, 4};
  std::vector<double> out = DpSanitize(g, 1.0, 0.0, rng);
  EXPECT_NEAR(out[0], 0.6, 1e-15);
  EXPECT_NEAR(out[1], 0.8, 1e-15);
  EXPECT_THROW(DpSanitize(g, 1.0, -1.0, rng), std::invalid_argument);
}

TEST(SanitizeTest, NoiseStdMatchesSigmaTimesClip) {
  SeededRng rng(2);
  constexpr int kDraws = 10000;
  const double clip = 0.1, sigma = 1.3;
  std::vector<double> g = {0.0, 0.0, 0.0};
  std::vector<double> sq(3, 0.0);
  for (int i = 0; i < kDraws; ++i) {
    std::vector<double> out = DpSanitize(g, clip, sigma, rng);
    for (std::size_t j = 0; j < 3; ++j) sq[j] += out[j] * out[j];
  }
  for (double s : sq) {
    EXPECT_NEAR(std::sqrt(s / kDraws), sigma * clip, 0.05 * sigma * clip);
  }
}

TEST(SanitizeTest, OutputNormWithinGaussianTail) {
  SeededRng rng(3);
  const double clip = 0.1, sigma = 2.0;
  const std::size_t d = 50;
  std::vector<double> g(d, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> out = DpSanitize(g, clip, sigma, rng);
    ASSERT_LE(numkit::L2Norm(out), clip + 6 * sigma * clip * std::sqrt(d));
  }
}

TEST(RdpTest, FullBatchMatchesAnalyticCurve) {
  for (double sigma : {0.5, 1.0, 2.5}) {
    for (double alpha : RdpOrders()) {
      EXPECT_NEAR(SampledGaussianRdp(1.0, sigma, alpha),
                  alpha / (2 * sigma * sigma), 1e-12);
    }
  }
}

TEST(RdpTest, FullBatchEpsilonIsGridMinimum) {
  const double delta = 1e-5, sigma = 1.0;
  double scan = std::numeric_limits<double>::infinity();
  for (double alpha : RdpOrders()) {
    scan = std::min(scan, alpha / (2 * sigma * sigma) +
                              std::log(1 / delta) / (alpha - 1));
  }
  const double eps = RdpEpsilon(1.0, sigma, 1, delta);
  EXPECT_NEAR(eps, scan, 1e-12);
  // Continuous optimum: alpha* = 1 + sigma sqrt(2 L), value 1/(2 sigma^2) +
  // sqrt(2 L) / sigma with L = log(1/delta). The grid can only sit above it.
  const double l = std::log(1 / delta);
  const double continuous = 1 / (2 * sigma * sigma) + std::sqrt(2 * l) / sigma;
  EXPECT_GE(eps, continuous - 1e-12);
  EXPECT_LT(eps - continuous, 0.02);
}

TEST(RdpTest, SubsampledMatchesNumericIntegration) {
  for (double q : {0.01, 0.1, 0.5}) {
    for (double alpha : {2.0, 2.5, 3.5, 8.0}) {
      const double sigma = 1.5;
      const double expected = NumericSubsampledRdp(q, sigma, alpha);
      EXPECT_NEAR(SampledGaussianRdp(q, sigma, alpha), expected,
                  1e-6 * std::max(1.0, expected))
          << "q=" << q << " alpha=" << alpha;
    }
  }
}

TEST(RdpTest, SubsamplingAmplifiesPrivacy) {
  for (double alpha : {2.0, 8.0, 32.0}) {
    EXPECT_LT(SampledGaussianRdp(0.01, 1.0, alpha),
              SampledGaussianRdp(1.0, 1.0, alpha));
  }
  double last = 0.0;
  for (double alpha : RdpOrders()) {
    const double r = SampledGaussianRdp(0.05, 1.2, alpha);
    EXPECT_GE(r, last - 1e-12) << alpha;
    last = r;
  }
}

TEST(RdpTest, EpsilonMonotoneInRoundsAndSigma) {
  for (double q : {1.0, 0.03}) {
    EXPECT_LT(RdpEpsilon(q, 1.0, 1, 1e-5), RdpEpsilon(q, 1.0, 10, 1e-5));
    EXPECT_LT(RdpEpsilon(q, 1.0, 10, 1e-5), RdpEpsilon(q, 1.0, 100, 1e-5));
    EXPECT_GT(RdpEpsilon(q, 0.5, 50, 1e-5), RdpEpsilon(q, 1.0, 50, 1e-5));
    EXPECT_GT(RdpEpsilon(q, 1.0, 50, 1e-5), RdpEpsilon(q, 2.0, 50, 1e-5));
  }
}

TEST(RdpTest, ErrorsAndDegenerateNoise) {
  EXPECT_THROW(SampledGaussianRdp(0.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(SampledGaussianRdp(0.5, 1.0, 1.0), std::invalid_argument);
  EXPECT_TRUE(std::isinf(SampledGaussianRdp(0.5, 0.0, 2.0)));
  EXPECT_THROW(RdpEpsilon(0.5, 0.0, 1, 1e-5), std::domain_error);
  std::vector<double> short_curve(3, 0.0);
  EXPECT_THROW(EpsilonFromRdp(short_curve, 1e-5), std::invalid_argument);
}

TEST(CalibrateTest, RoundTripMeetsTarget) {
  for (double q : {1.0, 32.0 / 960.0}) {
    for (double target : {0.5, 1.0, 2.0, 16.0}) {
      const double sigma = CalibrateSigma(target, 1e-5, q, 300);
      EXPECT_LE(RdpEpsilon(q, sigma, 300, 1e-5), target);
      // Smallest such sigma up to the search tolerance.
      EXPECT_GT(RdpEpsilon(q, sigma * (1 - 2e-3), 300, 1e-5), target);
    }
  }
}

TEST(CalibrateTest, StricterBudgetsNeedMoreNoise) {
  const double q = 0.05;
  const double s16 = CalibrateSigma(16.0, 1e-5, q, 300);
  const double s2 = CalibrateSigma(2.0, 1e-5, q, 300);
  const double s05 = CalibrateSigma(0.5, 1e-5, q, 300);
  EXPECT_LT(s16, s2);
  EXPECT_LT(s2, s05);
  EXPECT_THROW(CalibrateSigma(0.0, 1e-5, q, 300), std::invalid_argument);
}

TEST(LedgerTest, MatchesClosedFormComposition) {
  PrivacyLedger ledger(1e-5);
  double eps = 0.0;
  for (int t = 0; t < 25; ++t) {
    const double next = ledger.Record(0.1, 1.1);
    EXPECT_GE(next, eps);
    eps = next;
  }
  EXPECT_NEAR(eps, RdpEpsilon(0.1, 1.1, 25, 1e-5), 1e-12);
  ASSERT_EQ(ledger.rows().size(), 25u);
  EXPECT_EQ(ledger.rows().back().round, 25u);
  EXPECT_THROW(PrivacyLedger(0.0), std::invalid_argument);
}

TEST(LedgerTest, JointConversionBeatsAddingEpsilons) {
  PrivacyLedger first(1e-5), second(1e-5), joint(1e-5);
  for (int t = 0; t < 40; ++t) {
    first.Record(0.2, 1.0);
    joint.Record(0.2, 1.0);
  }
  for (int t = 0; t < 60; ++t) {
    second.Record(0.05, 0.8);
    joint.Record(0.05, 0.8);
  }
  EXPECT_LE(joint.Epsilon(), first.Epsilon() + second.Epsilon());
}

TEST(DpConfigTest, Validation) {
  DpConfig ok;
  ok.target_epsilon = 1.0;
  EXPECT_NO_THROW(ok.Validate());
  DpConfig bad = ok;
  bad.clip = 0.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = ok;
  bad.target_epsilon = 0.0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = ok;
  bad.sampling_rate = 1.5;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = ok;
  bad.rounds = 0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace fedbench::privacy
