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
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fedbench/data/dataset.h"
#include "fedbench/models/mlp.h"
#include "fedbench/numkit/rng.h"
#include "fedbench/stats/bayes_ttest.h"
#include "fedbench/stats/metrics.h"
#include "gtest/gtest.h"

namespace fedbench::stats {
namespace {

// Diffs with an exact sample mean and sample standard deviation.
std::vector<double> DiffsWith(std::size_t n, double mean, double s,
                              std::uint64_t seed) {
  numkit::SeededRng rng(seed);
  std::vector<double> z(n);
  double m = 0.0;
  for (double& v : z) {
    v = rng.Normal();
    m += v / static_cast<double>(n);
  }
  double ss = 0.0;
  for (double& v : z) {
    v -= m;
    ss += v * v;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  for (double& v : z) v = mean + s * v / sd;
  return z;
}

double StudentTDensity(double x, double nu) {
  const double log_c = std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2) -
                       0.5 * std::log(nu * std::numbers::pi);
  return std::exp(log_c - (nu + 1) / 2 * std::log1p(x * x / nu));
}

// Trapezoid integral of the standard t density over [a, b].
double IntegrateT(double a, double b, double nu) {
  constexpr int kPoints = 100000;
  const double h = (b - a) / kPoints;
  double sum = 0.5 * (StudentTDensity(a, nu) + StudentTDensity(b, nu));
  for (int i = 1; i < kPoints; ++i) sum += StudentTDensity(a + i * h, nu);
  return sum * h;
}

TEST(EvaluateOutputsTest, Examples) {
  models::DenseMatrix perfect(3, 2);
  perfect(0, 0) = 0.9;
  perfect(1, 1) = 0.8;
  perfect(2, 0) = 0.6;
  std::vector<double> labels = {0, 1, 0};
  EXPECT_DOUBLE_EQ(EvaluateOutputs(perfect, labels, Metric::kTop1), 1.0);
  labels = {1, 1, 0};
  EXPECT_DOUBLE_EQ(EvaluateOutputs(perfect, labels, Metric::kTop1), 2.0 / 3);

  models::DenseMatrix reg(2, 1);
  reg(0, 0) = 1;
  reg(1, 0) = 2;
  std::vector<double> truth = {1, 4};
  EXPECT_DOUBLE_EQ(EvaluateOutputs(reg, truth, Metric::kMae), 1.0);
  EXPECT_DOUBLE_EQ(EvaluateOutputs(reg, truth, Metric::kMse), 2.0);

  models::DenseMatrix prob(4, 1);
  prob(0, 0) = 0.2;
  prob(1, 0) = 0.5;
  prob(2, 0) = 0.7;
  prob(3, 0) = 0.49;
  std::vector<double> bin = {0, 1, 1, 1};
  EXPECT_DOUBLE_EQ(EvaluateOutputs(prob, bin, Metric::kBinary), 0.75);
  EXPECT_THROW(EvaluateOutputs(perfect, bin, Metric::kBinary),
               std::invalid_argument);
  EXPECT_THROW(EvaluateOutputs(reg, labels, Metric::kMae),
               std::invalid_argument);
}

TEST(EvaluateTest, RejectsMismatchedHead) {
  models::MlpSpec spec{{2, 3}};
  models::ParamVector p = models::InitParams(spec, 1);
  data::Dataset ds;
  ds.features = models::DenseMatrix(2, 2);
  ds.labels = {0, 1};
  ds.num_classes = 3;
  EXPECT_NO_THROW(Evaluate(spec, p, ds, Metric::kTop1));
  EXPECT_THROW(Evaluate(spec, p, ds, Metric::kMae), std::invalid_argument);
}

TEST(MetricTest, NamesAndDirections) {
  for (Metric m : {Metric::kTop1, Metric::kBinary, Metric::kMae, Metric::kMse}) {
    EXPECT_EQ(ParseMetric(ToString(m)), m);
  }
  EXPECT_TRUE(HigherIsBetter(Metric::kTop1));
  EXPECT_FALSE(HigherIsBetter(Metric::kMae));
  EXPECT_EQ(DefaultMetric(models::Head::kLinearMse), Metric::kMse);
  EXPECT_THROW(ParseMetric("f1"), std::invalid_argument);
}

TEST(ConvergenceRoundsTest, Examples) {
  std::vector<int> curve = {0, 0, 1, 2, 2, 3, 4, 4};
  EXPECT_EQ(ConvergenceRounds(curve), std::optional<std::size_t>(7));
  std::vector<int> never = {0, 1, 2, 3, 3};
  EXPECT_EQ(ConvergenceRounds(never), std::nullopt);
  std::vector<int> bad = {0, 2, 1};
  EXPECT_THROW(ConvergenceRounds(bad), std::invalid_argument);
  std::vector<int> first = {4};
  EXPECT_EQ(ConvergenceRounds(first), std::optional<std::size_t>(1));
}

TEST(SummarizeTest, SampleStd) {
  std::vector<double> v = {2, 4, 4, 4, 5, 5, 7, 9};
  MeanStd s = Summarize(v);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.stddev, std::sqrt(32.0 / 7.0), 1e-15);
  EXPECT_EQ(Summarize(std::vector<double>{3.0}).stddev, 0.0);
}

TEST(BayesTTestTest, PointMassCases) {
  std::vector<double> zeros(5, 0.0);
  ComparisonResult r = BayesCorrelatedTTest(zeros, 0.01);
  EXPECT_EQ(r.p_rope, 1.0);
  std::vector<double> big(5, 0.5);
  EXPECT_EQ(BayesCorrelatedTTest(big, 0.01).p_right, 1.0);
  std::vector<double> neg(5, -0.5);
  EXPECT_EQ(BayesCorrelatedTTest(neg, 0.01).p_left, 1.0);
}

TEST(BayesTTestTest, NearlyConstantLargeDiffs) {
  std::vector<double> d = DiffsWith(10, 0.5, 1e-6, 3);
  EXPECT_GT(BayesCorrelatedTTest(d, 0.01).p_right, 1 - 1e-12);
}

TEST(BayesTTestTest, MatchesNumericIntegration) {
  std::vector<double> d = DiffsWith(12, 0.004, 0.01, 7);
  const double rope = 0.01;
  ComparisonResult r = BayesCorrelatedTTest(d, rope);
  const double scale = 0.01 / std::sqrt(12.0);
  const double lo = (-rope - 0.004) / scale;
  const double hi = (rope - 0.004) / scale;
  const double p_rope = IntegrateT(lo, hi, 11);
  const double p_left = 0.5 - IntegrateT(lo, 0.0, 11);
  const double p_right = 0.5 - IntegrateT(0.0, hi, 11);
  EXPECT_NEAR(r.p_rope, p_rope, 1e-6);
  EXPECT_NEAR(r.p_left, p_left, 1e-6);
  EXPECT_NEAR(r.p_right, p_right, 1e-6);
  // Frozen triple.
  EXPECT_NEAR(r.p_left, 0.0002554861, 1e-9);
  EXPECT_NEAR(r.p_rope, 0.9688133107, 1e-9);
  EXPECT_NEAR(r.p_right, 0.0309312032, 1e-9);
}

TEST(BayesTTestTest, Antisymmetry) {
  numkit::SeededRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(8), neg(8);
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = 0.01 * rng.Normal() + 0.003;
      neg[i] = -d[i];
    }
    ComparisonResult a = BayesCorrelatedTTest(d, 0.005, 0.2);
    ComparisonResult b = BayesCorrelatedTTest(neg, 0.005, 0.2);
    EXPECT_EQ(a.p_left, b.p_right);
    EXPECT_EQ(a.p_right, b.p_left);
    EXPECT_EQ(a.p_rope, b.p_rope);
  }
}

TEST(BayesTTestTest, SumsToOneAndRopeMonotone) {
  numkit::SeededRng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(6);
    for (double& v : d) v = 0.02 * rng.Normal() + 0.01;
    double last = -1.0;
    for (double rope : {0.0, 0.001, 0.005, 0.01, 0.05, 0.2}) {
      ComparisonResult r = BayesCorrelatedTTest(d, rope);
      EXPECT_NEAR(r.p_left + r.p_rope + r.p_right, 1.0, 1e-12);
      EXPECT_GE(r.p_rope, last);
      last = r.p_rope;
    }
  }
}

TEST(BayesTTestTest, ScaleInvariance) {
  std::vector<double> d = DiffsWith(9, 0.02, 0.03, 5);
  ComparisonResult base = BayesCorrelatedTTest(d, 0.01, 0.1);
  for (double c : {0.5, 3.0, 1000.0}) {
    std::vector<double> scaled = d;
    for (double& v : scaled) v *= c;
    ComparisonResult r = BayesCorrelatedTTest(scaled, 0.01 * c, 0.1);
    EXPECT_NEAR(r.p_left, base.p_left, 1e-12);
    EXPECT_NEAR(r.p_rope, base.p_rope, 1e-12);
    EXPECT_NEAR(r.p_right, base.p_right, 1e-12);
  }
}

TEST(BayesTTestTest, CorrelationWidensPosterior) {
  std::vector<double> d = DiffsWith(10, 0.03, 0.02, 9);
  EXPECT_GT(BayesCorrelatedTTest(d, 0.01, 0.0).p_right,
            BayesCorrelatedTTest(d, 0.01, 0.5).p_right);
}

TEST(BayesTTestTest, Errors) {
  std::vector<double> one = {0.1};
  EXPECT_THROW(BayesCorrelatedTTest(one, 0.01), std::invalid_argument);
  std::vector<double> two = {0.1, 0.2};
  EXPECT_THROW(BayesCorrelatedTTest(two, -0.01), std::invalid_argument);
  EXPECT_THROW(BayesCorrelatedTTest(two, 0.01, 1.0), std::invalid_argument);
  two[1] = std::nan("");
  EXPECT_THROW(BayesCorrelatedTTest(two, 0.01), std::invalid_argument);
}

}  // namespace
}  // namespace fedbench::stats
