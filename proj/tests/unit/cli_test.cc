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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedbench/cli/config.h"
#include "fedbench/cli/experiment.h"
#include "fedbench/cli/presets.h"
#include "fedbench/cli/report.h"
#include "fedbench/cli/runner.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace fedbench::cli {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using nlohmann::json;

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::path(::testing::TempDir()) / ("fedbench_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig SmallConfig(const std::string& dir_name) {
  ExperimentConfig c = Preset("baseline");
  c.name = "small";
  c.workload.synth.n = 600;
  c.workload.synth.d = 6;
  c.workload.synth.classes = 3;
  c.workload.synth.separation = 3.0;
  c.clients = 3;
  c.algo.max_rounds = 6;
  c.repetitions = 3;
  c.output_dir = FreshDir(dir_name).string();
  return c;
}

json MinimalDoc() {
  return json::parse(R"({
    "format": "fedbench-config/1",
    "workload": {"source": "synth", "kind": "blobs", "n": 300, "d": 4,
                 "classes": 2},
    "algorithm": {"name": "fedsgd"}
  })");
}

std::string Joined(const ParseOutcome& o) {
  std::string all;
  for (const auto& e : o.errors) all += e + "\n";
  return all;
}

TEST(ConfigTest, EveryPresetRoundTripsThroughText) {
  for (const PresetInfo& info : PresetCatalog()) {
    const ExperimentConfig c = Preset(info.name);
    const json doc = ToJson(c);
    ParseOutcome back = ParseConfig(doc.dump());
    ASSERT_TRUE(back.ok()) << info.name << "\n" << Joined(back);
    EXPECT_EQ(ToJson(*back.config), doc) << info.name;
  }
  EXPECT_EQ(PresetCatalog().size(), 9u);
  EXPECT_THROW(Preset("fedma"), std::invalid_argument);
}

TEST(ConfigTest, BaselineIsPlainFedSgd) {
  const ExperimentConfig c = Preset("baseline");
  EXPECT_EQ(c.algo.algorithm, fl::Algorithm::kFedSgd);
  EXPECT_EQ(c.algo.client_fraction, 1.0);
  EXPECT_EQ(c.algo.local_epochs, 1u);
  EXPECT_FALSE(c.dp.has_value());
  EXPECT_FALSE(c.secagg.enabled);
  EXPECT_EQ(c.compression.method, compression::Method::kNone);
  EXPECT_EQ(c.mode, SetupMode::kFederated);
}

TEST(ConfigTest, HybridPresetComposition) {
  const ExperimentConfig c = Preset("hybrid");
  EXPECT_TRUE(c.secagg.enabled);
  EXPECT_EQ(c.secagg.parts - 1, 2u);  // parts sent
  ASSERT_TRUE(c.dp.has_value());
  EXPECT_EQ(c.dp->target_epsilon, 1.0);
  EXPECT_EQ(c.compression.method, compression::Method::kTopK);
  EXPECT_EQ(c.compression.k_fraction, 0.01);
  EXPECT_EQ(c.channel.bandwidth_bps, 100e6);
}

TEST(ConfigTest, MinimalDocumentParses) {
  ParseOutcome o = ParseConfigJson(MinimalDoc());
  ASSERT_TRUE(o.ok()) << Joined(o);
  EXPECT_EQ(o.config->workload.synth.n, 300u);
  EXPECT_EQ(o.config->repetitions, 1u);
}

TEST(ConfigTest, FedSgdWithPartialParticipationIsRejected) {
  json doc = MinimalDoc();
  doc["algorithm"]["fraction"] = 0.5;
  ParseOutcome o = ParseConfigJson(doc);
  EXPECT_FALSE(o.ok());
  EXPECT_THAT(Joined(o), HasSubstr("fraction"));
}

TEST(ConfigTest, MissingWorkloadFieldIsNamed) {
  json doc = MinimalDoc();
  doc["workload"].erase("kind");
  EXPECT_THAT(Joined(ParseConfigJson(doc)), HasSubstr("workload.kind"));
  doc = MinimalDoc();
  doc.erase("workload");
  EXPECT_THAT(Joined(ParseConfigJson(doc)), HasSubstr("workload"));
}

TEST(ConfigTest, UnknownKeysAndAllErrorsReported) {
  json doc = MinimalDoc();
  doc["algorithm"]["lr"] = 0.1;
  doc["colour"] = "blue";
  doc["workload"]["n"] = "many";
  ParseOutcome o = ParseConfigJson(doc);
  EXPECT_FALSE(o.ok());
  EXPECT_GE(o.errors.size(), 3u);
  const std::string all = Joined(o);
  EXPECT_THAT(all, HasSubstr("algorithm.lr"));
  EXPECT_THAT(all, HasSubstr("colour"));
  EXPECT_THAT(all, HasSubstr("workload.n"));
}

TEST(ConfigTest, MalformedTextAndWrongFormat) {
  EXPECT_FALSE(ParseConfig("{not json").ok());
  json doc = MinimalDoc();
  doc["format"] = "something-else/9";
  EXPECT_THAT(Joined(ParseConfigJson(doc)), HasSubstr("format"));
  EXPECT_THROW(ParseConfigOrThrow("{}"), std::invalid_argument);
}

TEST(ConfigTest, PartsSentMapsToParts) {
  json doc = MinimalDoc();
  doc["partition"] = {{"clients", 5}};
  doc["secure_agg"] = {{"parts_sent", 2}};
  ParseOutcome o = ParseConfigJson(doc);
  ASSERT_TRUE(o.ok()) << Joined(o);
  EXPECT_TRUE(o.config->secagg.enabled);
  EXPECT_EQ(o.config->secagg.parts, 3u);
  doc["secure_agg"]["parts"] = 3;
  EXPECT_FALSE(ParseConfigJson(doc).ok());
}

TEST(ConfigTest, CrossModuleValidation) {
  ExperimentConfig c = Preset("baseline");
  c.repetitions = 0;
  c.secagg.enabled = true;
  c.secagg.parts = 9;
  const auto errors = ValidateConfig(c);
  EXPECT_GE(errors.size(), 2u);
}

TEST(RunnerTest, RepetitionsProduceFilesAndSummaryRows) {
  ExperimentConfig c = SmallConfig("reps");
  RunReport report = RunExperimentConfig(c);
  ASSERT_TRUE(report.all_ok);
  const fs::path dir = c.output_dir;
  for (int seed : {1, 2, 3}) {
    EXPECT_TRUE(fs::exists(dir / ("run_" + std::to_string(seed) + ".jsonl")));
    EXPECT_TRUE(fs::exists(dir / ("ledger_" + std::to_string(seed) + ".csv")));
  }
  EXPECT_TRUE(fs::exists(dir / "config.json"));
  // Three runs plus the aggregate row, after the header.
  std::istringstream summary(ReadFile(dir / "summary.csv"));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(summary, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_THAT(lines[4], HasSubstr("aggregate"));
  EXPECT_THAT(lines[0], HasSubstr("final_metric"));

  std::istringstream first(ReadFile(dir / "run_1.jsonl"));
  std::getline(first, line);
  json record = json::parse(line);
  for (const char* key : {"round", "metric", "lr", "reduction_count",
                          "bytes_up", "bytes_down"}) {
    EXPECT_TRUE(record.contains(key)) << key;
  }
  EXPECT_EQ(record["format"], kRoundFormat);
}

TEST(RunnerTest, RerunIsByteIdentical) {
  ExperimentConfig c = SmallConfig("rerun_a");
  c.repetitions = 1;
  RunExperimentConfig(c);
  const std::string a = ReadFile(fs::path(c.output_dir) / "run_1.jsonl");
  const std::string la = ReadFile(fs::path(c.output_dir) / "ledger_1.csv");
  c.output_dir = FreshDir("rerun_b").string();
  RunExperimentConfig(c);
  EXPECT_EQ(ReadFile(fs::path(c.output_dir) / "run_1.jsonl"), a);
  EXPECT_EQ(ReadFile(fs::path(c.output_dir) / "ledger_1.csv"), la);
  EXPECT_FALSE(a.empty());
}

TEST(RunnerTest, FailingRepetitionIsRecorded) {
  ExperimentConfig c = SmallConfig("fail");
  c.repetitions = 1;
  c.optimizer.lr = 1e200;  // diverges
  RunReport report = RunExperimentConfig(c);
  EXPECT_FALSE(report.all_ok);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_FALSE(report.rows[0].ok);
  EXPECT_THAT(ReadFile(fs::path(c.output_dir) / "summary.csv"), HasSubstr("error"));
}

TEST(SummaryCsvTest, RoundTrip) {
  SummaryRow a;
  a.preset = "p";
  a.seed = 4;
  a.final_metric = 0.8125;
  a.convergence_rounds = 37;
  a.converged = true;
  a.throughput = 1234.5;
  a.overhead = 0.25;
  a.uplink_ratio = 33.32;
  a.eps_spent = 0.97;
  a.rounds = 37;
  SummaryRow b = a;
  b.seed = 5;
  b.ok = false;
  b.error = "boom, with comma";
  b.eps_spent.reset();
  b.convergence_rounds.reset();
  std::stringstream ss;
  WriteSummaryCsv(ss, {a, b});
  std::vector<SummaryRow> back = ReadSummaryCsv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].final_metric, a.final_metric);
  EXPECT_EQ(back[0].convergence_rounds, a.convergence_rounds);
  EXPECT_EQ(back[0].eps_spent, a.eps_spent);
  EXPECT_EQ(back[0].uplink_ratio, a.uplink_ratio);
  EXPECT_FALSE(back[1].ok);
  // Commas inside the error text are replaced so the row keeps its columns.
  EXPECT_EQ(back[1].error, "boom; with comma");
  EXPECT_FALSE(back[1].eps_spent.has_value());
}

TEST(ReportTest, IdenticalRunSetsAreEquivalent) {
  ExperimentConfig c = SmallConfig("report_a");
  RunExperimentConfig(c);
  const fs::path a = c.output_dir;
  c.output_dir = FreshDir("report_b").string();
  RunExperimentConfig(c);
  std::vector<RunSet> sets = {LoadRunSet(a), LoadRunSet(c.output_dir)};
  ASSERT_EQ(sets[0].rows.size(), 3u);
  std::vector<PairComparison> cmp = CompareRunSets(sets, kDefaultAccuracyRope);
  ASSERT_EQ(cmp.size(), 2u);
  for (const auto& p : cmp) EXPECT_NEAR(p.p_equal, 1.0, 1e-12) << p.measure;
  EXPECT_EQ(cmp[1].rope, kConvergenceRope);
  EXPECT_EQ(kDefaultAccuracyRope, 0.01);
  const std::string md = RenderReport(sets, cmp);
  EXPECT_THAT(md, HasSubstr("p_Equal"));
  EXPECT_THAT(md, HasSubstr("report_a"));

  EXPECT_THROW(CompareRunSets({sets[0]}, 0.01), std::invalid_argument);
  sets[1].workload["n"] = 12345;
  EXPECT_THROW(CompareRunSets(sets, 0.01), std::invalid_argument);
}

TEST(ExperimentTest, BaselineModesShareTheSplit) {
  ExperimentConfig c = SmallConfig("modes");
  HorizontalSetup fed = BuildHorizontal(c, 1);
  ASSERT_EQ(fed.data.clients.size(), 3u);
  std::size_t total = 0;
  for (const auto& d : fed.data.clients) total += d.size();
  c.mode = SetupMode::kCombined;
  HorizontalSetup combined = BuildHorizontal(c, 1);
  ASSERT_EQ(combined.data.clients.size(), 1u);
  EXPECT_EQ(combined.data.clients[0].size(), total);
  c.mode = SetupMode::kSolo;
  c.solo_client = 2;
  HorizontalSetup solo = BuildHorizontal(c, 1);
  ASSERT_EQ(solo.data.clients.size(), 1u);
  EXPECT_EQ(solo.data.clients[0].size(), fed.data.clients[2].size());
  EXPECT_EQ(solo.data.test.size(), fed.data.test.size());
}

TEST(ExperimentTest, VerticalPresetBuildsAlignedParties) {
  ExperimentConfig c = Preset("vertical-baseline");
  VerticalSetup v = BuildVertical(c, 1);
  EXPECT_EQ(v.data.party_widths, (std::vector<std::size_t>{10, 10}));
  EXPECT_EQ(v.data.train.width(), 20u);
  c.vertical.combine_parties = true;
  VerticalSetup joint = BuildVertical(c, 1);
  EXPECT_EQ(joint.data.party_widths, (std::vector<std::size_t>{20}));
}

}  // namespace
}  // namespace fedbench::cli
