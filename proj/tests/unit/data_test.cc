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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fedbench/data/csv.h"
#include "fedbench/data/dataset.h"
#include "fedbench/data/partition.h"
#include "fedbench/data/synth.h"
#include "fedbench/data/vertical.h"
#include "fedbench/models/mlp.h"
#include "fedbench/models/optimizer.h"
#include "fedbench/stats/metrics.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace fedbench::data {
namespace {

using ::testing::ElementsAre;
using ::testing::UnorderedElementsAre;

template <typename Span>
std::vector<double> ToVec(Span s) {
  return std::vector<double>(s.begin(), s.end());
}

Dataset Blobs(std::size_t n, std::size_t classes, std::uint64_t seed,
              double noise = 1.0, double separation = 3.0) {
  SynthSpec spec;
  spec.n = n;
  spec.d = 4;
  spec.classes = classes;
  spec.noise = noise;
  spec.separation = separation;
  spec.seed = seed;
  return SynthDataset(spec);
}

Dataset Keyed(std::vector<std::string> keys,
              std::vector<std::vector<double>> rows,
              std::vector<double> labels) {
  Dataset ds;
  ds.name = "keyed";
  ds.keys = std::move(keys);
  ds.features = DenseMatrix(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), ds.features.row(r).begin());
  }
  ds.labels = std::move(labels);
  ds.num_classes = 2;
  return ds;
}

std::vector<std::vector<double>> ClassShares(const Dataset& train,
                                             const PartitionSpec& p) {
  std::vector<std::vector<double>> shares;
  for (const auto& idx : p.client_indices) {
    std::vector<double> counts(train.num_classes, 0.0);
    for (std::size_t i : idx) counts[static_cast<std::size_t>(train.labels[i])]++;
    for (double& c : counts) c /= static_cast<double>(idx.size());
    shares.push_back(counts);
  }
  return shares;
}

// Mean over classes of the largest share any single client holds.
double MeanMaxClientShare(const Dataset& train, const PartitionSpec& p) {
  std::vector<std::size_t> totals = train.ClassCounts();
  double sum = 0.0;
  for (std::size_t k = 0; k < train.num_classes; ++k) {
    double best = 0.0;
    for (const auto& idx : p.client_indices) {
      double count = 0.0;
      for (std::size_t i : idx) count += train.labels[i] == k ? 1.0 : 0.0;
      best = std::max(best, count / static_cast<double>(totals[k]));
    }
    sum += best;
  }
  return sum / static_cast<double>(train.num_classes);
}

TEST(SplitTest, FloorRuleSizes) {
  TrainTestVal s = SplitTrainTestVal(Blobs(1200, 3, 1), 9);
  EXPECT_EQ(s.train.size(), 999u);
  EXPECT_EQ(s.test.size(), 99u);
  EXPECT_EQ(s.val.size(), 102u);
}

TEST(SplitTest, DeterministicDisjointExhaustive) {
  Dataset ds = Blobs(300, 3, 2);
  TrainTestVal a = SplitTrainTestVal(ds, 4);
  TrainTestVal b = SplitTrainTestVal(ds, 4);
  EXPECT_EQ(a.train.keys, b.train.keys);
  EXPECT_EQ(a.val.keys, b.val.keys);
  std::multiset<std::string> all;
  for (const Dataset* part : {&a.train, &a.test, &a.val}) {
    all.insert(part->keys.begin(), part->keys.end());
  }
  EXPECT_EQ(all.size(), ds.size());
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()),
            std::set<std::string>(ds.keys.begin(), ds.keys.end()));
  EXPECT_NE(SplitTrainTestVal(ds, 5).train.keys, a.train.keys);
}

TEST(SplitTest, RejectsTinyDatasets) {
  EXPECT_THROW(SplitTrainTestVal(Blobs(11, 2, 1), 1), std::invalid_argument);
  EXPECT_NO_THROW(SplitTrainTestVal(Blobs(12, 2, 1), 1));
}

TEST(IidPartitionTest, EvenAndRemainderSizes) {
  Dataset hundred = Blobs(100, 2, 1);
  EXPECT_THAT(PartitionIid(hundred, 5, 3).ClientSizes(),
              ElementsAre(20, 20, 20, 20, 20));
  Dataset odd = Blobs(101, 2, 1);
  EXPECT_THAT(PartitionIid(odd, 5, 3).ClientSizes(),
              UnorderedElementsAre(21, 20, 20, 20, 20));
}

TEST(IidPartitionTest, ClassProportionsTrackGlobal) {
  Dataset train = Blobs(5000, 5, 7);
  PartitionSpec p = PartitionIid(train, 5, 11);
  p.CheckSetPartition(train.size());
  for (const auto& shares : ClassShares(train, p)) {
    for (double s : shares) EXPECT_NEAR(s, 0.2, 0.05);
  }
}

TEST(IidPartitionTest, RejectsTooManyClients) {
  EXPECT_THROW(PartitionIid(Blobs(4, 2, 1), 5, 1), std::invalid_argument);
}

TEST(LabelSkewTest, HugeAlphaIsNearUniform) {
  Dataset train = Blobs(10000, 10, 3);
  PartitionSpec p = PartitionLabelSkew(train, 1e6, 5, 21);
  p.CheckSetPartition(train.size());
  for (const auto& shares : ClassShares(train, p)) {
    for (double s : shares) EXPECT_NEAR(s, 0.1, 0.02);
  }
}

TEST(LabelSkewTest, SmallAlphaConcentratesClasses) {
  Dataset train = Blobs(5000, 10, 3);
  PartitionSpec p = PartitionLabelSkew(train, 0.2, 5, 22);
  p.CheckSetPartition(train.size());
  EXPECT_GT(MeanMaxClientShare(train, p), 0.5);
}

TEST(LabelSkewTest, SkewMonotoneInAlphaOverSeeds) {
  Dataset train = Blobs(1000, 10, 3);
  double skew_02 = 0.0, skew_10 = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    skew_02 += MeanMaxClientShare(train, PartitionLabelSkew(train, 0.2, 5, seed));
    skew_10 += MeanMaxClientShare(train, PartitionLabelSkew(train, 1.0, 5, seed));
  }
  EXPECT_GT(skew_02, skew_10);
}

TEST(LabelSkewTest, NoEmptyClientsAndErrors) {
  Dataset train = Blobs(200, 4, 3);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (std::size_t size : PartitionLabelSkew(train, 0.05, 5, seed).ClientSizes()) {
      EXPECT_GT(size, 0u);
    }
  }
  EXPECT_THROW(PartitionLabelSkew(train, 0.0, 5, 1), std::invalid_argument);
  Dataset regression = train;
  regression.num_classes = 0;
  EXPECT_THROW(PartitionLabelSkew(regression, 1.0, 5, 1), std::invalid_argument);
}

TEST(QuantitySkewTest, HugeAlphaIsNearEven) {
  Dataset train = Blobs(5000, 5, 4);
  PartitionSpec p =
      PartitionQuantitySkew(train, 1e6, 5, 9, QuantityMode::kDirichlet);
  p.CheckSetPartition(train.size());
  for (std::size_t size : p.ClientSizes()) {
    EXPECT_NEAR(static_cast<double>(size), 1000.0, 20.0);
  }
}

TEST(QuantitySkewTest, ForcedWeightsAreStratified) {
  Dataset train = Blobs(1000, 5, 4);
  std::vector<double> weights = {0.5, 0.3, 0.2};
  PartitionSpec p = PartitionByWeights(train, weights, 5);
  EXPECT_THAT(p.ClientSizes(), ElementsAre(500, 300, 200));
  p.CheckSetPartition(train.size());
  for (const auto& shares : ClassShares(train, p)) {
    for (double s : shares) EXPECT_NEAR(s, 0.2, 0.01);
  }
}

TEST(QuantitySkewTest, PowerLawModeIsSkewedAndValid) {
  Dataset train = Blobs(1000, 5, 4);
  PartitionSpec p =
      PartitionQuantitySkew(train, 1.5, 5, 2, QuantityMode::kPowerLaw);
  p.CheckSetPartition(train.size());
  std::vector<std::size_t> sizes = p.ClientSizes();
  EXPECT_GT(*std::max_element(sizes.begin(), sizes.end()),
            2 * *std::min_element(sizes.begin(), sizes.end()));
}

TEST(PartitionTest, LargestRemainderRounding) {
  std::vector<double> w = {1, 1, 1};
  EXPECT_THAT(LargestRemainderCounts(w, 10), UnorderedElementsAre(4, 3, 3));
  std::vector<double> skew = {0.55, 0.45};
  EXPECT_THAT(LargestRemainderCounts(skew, 3), ElementsAre(2, 1));
  std::vector<double> zero = {0, 0};
  EXPECT_THROW(LargestRemainderCounts(zero, 3), std::invalid_argument);
}

TEST(PartitionTest, CheckSetPartitionCatchesOverlapAndGaps) {
  PartitionSpec p;
  p.client_indices = {{0, 1}, {1, 2}};
  EXPECT_THROW(p.CheckSetPartition(3), std::logic_error);
  p.client_indices = {{0}, {2}};
  EXPECT_THROW(p.CheckSetPartition(3), std::logic_error);
  p.client_indices = {{0, 2}, {1}};
  EXPECT_NO_THROW(p.CheckSetPartition(3));
}

TEST(PartitionTest, ParsesSchemes) {
  EXPECT_EQ(ParsePartitionScheme("label-skew"), PartitionScheme::kLabelSkew);
  EXPECT_EQ(ToString(PartitionScheme::kQuantitySkew), "quantity-skew-dirichlet");
  EXPECT_EQ(ParsePartitionScheme("quantity-skew-dirichlet"),
            PartitionScheme::kQuantitySkew);
  EXPECT_THROW(ParsePartitionScheme("shards"), std::invalid_argument);
}

TEST(AlignVerticalTest, DisjointKeysPadWithZeros) {
  Dataset a = Keyed({"a1", "a2", "a3"}, {{1, 2}, {3, 4}, {5, 6}}, {0, 1, 0});
  Dataset b = Keyed({"b1", "b2"}, {{7}, {8}}, {1, 1});
  AlignedDataset j = AlignVertical(a, b);
  ASSERT_EQ(j.joined.size(), 5u);
  EXPECT_EQ(j.joined.width(), 3u);
  for (std::size_t r = 0; r < 5; ++r) {
    EXPECT_NE(j.present_a[r], j.present_b[r]);
    auto row = j.joined.features.row(r);
    if (j.present_a[r]) {
      EXPECT_EQ(row[2], 0.0);
    } else {
      EXPECT_EQ(row[0], 0.0);
      EXPECT_EQ(row[1], 0.0);
    }
  }
}

TEST(AlignVerticalTest, SharedKeysConcatenate) {
  Dataset a = Keyed({"k1"}, {{1, 2}}, {1});
  Dataset b = Keyed({"k1"}, {{9}}, {0});
  AlignedDataset j = AlignVertical(a, b);
  ASSERT_EQ(j.joined.size(), 1u);
  EXPECT_THAT(ToVec(j.joined.features.row(0)), ElementsAre(1, 2, 9));
  EXPECT_EQ(j.joined.labels[0], 1.0);
  EXPECT_EQ(AlignVertical(a, b, LabelOwner::kB).joined.labels[0], 0.0);
  EXPECT_THAT(ToVec(j.PartyFeatures(1).values()), ElementsAre(9));
}

TEST(AlignVerticalTest, IdenticalKeysHaveNoPadding) {
  Dataset a = Keyed({"x", "y"}, {{1}, {2}}, {0, 1});
  Dataset b = Keyed({"y", "x"}, {{20}, {10}}, {1, 0});
  AlignedDataset j = AlignVertical(a, b);
  ASSERT_EQ(j.joined.size(), 2u);
  EXPECT_THAT(ToVec(j.joined.features.row(0)), ElementsAre(1, 10));
  EXPECT_THAT(ToVec(j.joined.features.row(1)), ElementsAre(2, 20));
}

TEST(AlignVerticalTest, SymmetricRowSets) {
  Dataset a = Keyed({"p", "q", "r"}, {{1}, {2}, {3}}, {0, 1, 0});
  Dataset b = Keyed({"q", "s"}, {{5}, {6}}, {1, 1});
  AlignedDataset ab = AlignVertical(a, b);
  AlignedDataset ba = AlignVertical(b, a);
  EXPECT_EQ(std::set<std::string>(ab.joined.keys.begin(), ab.joined.keys.end()),
            std::set<std::string>(ba.joined.keys.begin(), ba.joined.keys.end()));
}

TEST(AlignVerticalTest, RejectsDuplicateOrMissingKeys) {
  Dataset dup = Keyed({"k", "k"}, {{1}, {2}}, {0, 1});
  Dataset b = Keyed({"k"}, {{1}}, {0});
  EXPECT_THROW(AlignVertical(dup, b), std::invalid_argument);
  Dataset unkeyed = b;
  unkeyed.keys.clear();
  EXPECT_THROW(AlignVertical(unkeyed, b), std::invalid_argument);
}

TEST(SynthTest, Deterministic) {
  SynthSpec spec;
  spec.seed = 5;
  Dataset a = SynthDataset(spec);
  Dataset b = SynthDataset(spec);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
  spec.seed = 6;
  EXPECT_NE(SynthDataset(spec).features, a.features);
}

TEST(SynthTest, NoiselessBlobsAreLinearlySeparable) {
  SynthSpec spec;
  spec.n = 300;
  spec.d = 5;
  spec.classes = 3;
  spec.noise = 0.0;
  spec.separation = 10.0;
  spec.seed = 8;
  Dataset ds = SynthDataset(spec);
  models::MlpSpec probe = models::LogisticRegressionSpec(5, 3);
  models::ParamVector p = models::InitParams(probe, 1);
  models::OptimizerState opt({models::OptimizerKind::kSgdMomentum, 0.1, 0.9},
                             p.size());
  numkit::DenseMatrix targets = models::MakeTargets(probe, ds.labels);
  for (int step = 0; step < 300; ++step) {
    auto fwd = models::Forward(probe, p, ds.features);
    opt.Step(p.values, models::Backward(probe, p, fwd.cache, targets).values);
  }
  EXPECT_DOUBLE_EQ(stats::Evaluate(probe, p, ds, stats::Metric::kTop1), 1.0);
}

TEST(SynthTest, NoiselessRegressionRecoversWeights) {
  SynthSpec spec;
  spec.kind = SynthKind::kLinearRegression;
  spec.n = 200;
  spec.d = 6;
  spec.noise = 0.0;
  spec.seed = 13;
  Dataset ds = SynthDataset(spec);
  EXPECT_FALSE(ds.is_classification());
  Eigen::MatrixXd x(ds.size(), spec.d);
  Eigen::VectorXd y(ds.size());
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < spec.d; ++c) x(r, c) = ds.features(r, c);
    y(r) = ds.labels[r];
  }
  Eigen::VectorXd w = (x.transpose() * x).ldlt().solve(x.transpose() * y);
  std::vector<double> truth = SynthRegressionWeights(spec);
  for (std::size_t c = 0; c < spec.d; ++c) EXPECT_NEAR(w(c), truth[c], 1e-8);
}

TEST(SynthTest, RejectsEmptyShapes) {
  SynthSpec spec;
  spec.n = 0;
  EXPECT_THROW(SynthDataset(spec), std::invalid_argument);
  EXPECT_THROW(ParseSynthKind("moons"), std::invalid_argument);
}

TEST(DatasetTest, SubsetAndValidate) {
  Dataset ds = Blobs(10, 2, 1);
  std::vector<std::size_t> idx = {3, 1};
  Dataset sub = ds.Subset(idx);
  EXPECT_EQ(sub.size(), 2u);
  EXPECT_EQ(sub.keys[0], ds.keys[3]);
  EXPECT_EQ(sub.labels[1], ds.labels[1]);
  Dataset bad = ds;
  bad.labels.pop_back();
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
  bad = ds;
  bad.labels[0] = 7;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
}

TEST(CsvTest, RoundTripWithKeys) {
  Dataset ds = Blobs(20, 3, 2);
  std::stringstream buffer;
  WriteCsv(buffer, ds);
  Dataset back = ReadCsv(buffer, CsvTask::kClassification, "rt");
  EXPECT_EQ(back.features, ds.features);
  EXPECT_EQ(back.labels, ds.labels);
  EXPECT_EQ(back.keys, ds.keys);
  EXPECT_EQ(back.num_classes, 3u);
}

TEST(CsvTest, RegressionAndErrors) {
  std::istringstream ok("x,y,target\n1,2,0.5\n3,4,-1.5\n");
  Dataset ds = ReadCsv(ok, CsvTask::kRegression, "reg");
  EXPECT_EQ(ds.width(), 2u);
  EXPECT_FALSE(ds.is_classification());
  EXPECT_THAT(ds.labels, ElementsAre(0.5, -1.5));
  std::istringstream ragged("x,y\n1,2,3\n");
  EXPECT_THROW(ReadCsv(ragged, CsvTask::kRegression, "bad"), std::runtime_error);
  std::istringstream text("x,y\nabc,1\n");
  EXPECT_THROW(ReadCsv(text, CsvTask::kRegression, "bad"), std::runtime_error);
  EXPECT_THROW(ReadCsvFile("/nonexistent/file.csv", CsvTask::kRegression),
               std::runtime_error);
}

}  // namespace
}  // namespace fedbench::data
