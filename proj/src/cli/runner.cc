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

#include "fedbench/cli/runner.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fedbench/cli/experiment.h"
#include "fedbench/stats/metrics.h"

namespace fedbench::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Shortest text that reads back to the same double.
std::string Num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

json BucketJson(const netsim::BucketTimes& b) {
  json j;
  for (std::size_t i = 0; i < netsim::kNumBuckets; ++i) {
    const auto bucket = static_cast<netsim::Bucket>(i);
    j[std::string(netsim::ToString(bucket))] = b.seconds(bucket);
  }
  return j;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string FormatMeanStd(const std::vector<double>& v) {
  if (v.empty()) return "";
  const stats::MeanStd ms = stats::Summarize(v);
  return Num(ms.mean) + "±" + Num(ms.stddev);
}

}  // namespace

const std::vector<std::string>& SummaryColumns() {
  static const std::vector<std::string> cols = {
      "format",     "preset",   "seed",         "status",    "final_metric",
      "convergence_rounds",     "converged",    "throughput", "overhead",
      "uplink_ratio", "eps_spent", "rounds",    "error"};
  return cols;
}

const std::vector<std::string>& LedgerColumns() {
  static const std::vector<std::string> cols = {
      "format",      "round",    "actor",    "train_s", "communicate_s",
      "encrypt_s",   "idle_s",   "other_s",  "bytes_up", "bytes_down"};
  return cols;
}

SummaryRow MakeSummaryRow(const ExperimentConfig& config, std::uint64_t seed,
                          const fl::ExperimentResult& result) {
  SummaryRow row;
  row.preset = config.name;
  row.seed = seed;
  row.final_metric = result.final_metric;
  row.converged = result.convergence_rounds.has_value();
  row.convergence_rounds = result.convergence_rounds;
  const std::optional<std::size_t> cap =
      config.mode == SetupMode::kVertical
          ? std::optional<std::size_t>(config.vertical.max_epochs)
          : config.algo.max_rounds;
  if (!row.converged && cap && result.rounds_run == *cap) {
    row.convergence_rounds = *cap;
  }
  row.throughput = result.throughput;
  row.overhead = result.overhead;
  row.uplink_ratio = result.uplink_ratio;
  row.eps_spent = result.epsilon;
  row.rounds = result.rounds_run;
  return row;
}

json RoundRecord(const fl::RoundResult& r) {
  json j;
  j["format"] = kRoundFormat;
  j["round"] = r.round;
  j["participants"] = r.participants;
  j["metric"] = r.metric;
  j["val_loss"] = r.val_loss;
  j["lr"] = r.lr;
  j["reduction_count"] = r.reduction_count;
  j["bytes_up"] = r.bytes_up;
  j["bytes_down"] = r.bytes_down;
  j["bytes_peer"] = r.bytes_peer;
  j["seconds"] = BucketJson(r.buckets);
  if (r.epsilon) j["epsilon"] = *r.epsilon;
  return j;
}

void WriteSummaryCsv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  const auto& cols = SummaryColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  std::vector<double> metric, conv, thr, ovh, up, eps;
  for (const SummaryRow& r : rows) {
    std::string err = r.error;
    for (char& ch : err) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    out << kSummaryFormat << ',' << r.preset << ',' << r.seed << ','
        << (r.ok ? "ok" : "error") << ',';
    if (r.ok) {
      out << Num(r.final_metric) << ','
          << (r.convergence_rounds ? std::to_string(*r.convergence_rounds) : "")
          << ',' << (r.converged ? "true" : "false") << ',' << Num(r.throughput)
          << ',' << Num(r.overhead) << ',' << Num(r.uplink_ratio) << ','
          << (r.eps_spent ? Num(*r.eps_spent) : "") << ',' << r.rounds << ",\n";
      metric.push_back(r.final_metric);
      if (r.convergence_rounds) conv.push_back(static_cast<double>(*r.convergence_rounds));
      thr.push_back(r.throughput);
      ovh.push_back(r.overhead);
      up.push_back(r.uplink_ratio);
      if (r.eps_spent) eps.push_back(*r.eps_spent);
    } else {
      out << ",,,,,,,," << err << '\n';
    }
  }
  const std::string preset = rows.empty() ? "" : rows.front().preset;
  out << kSummaryFormat << ',' << preset << ",aggregate,"
      << (metric.size() == rows.size() ? "ok" : "partial") << ','
      << FormatMeanStd(metric) << ',' << FormatMeanStd(conv) << ",,"
      << FormatMeanStd(thr) << ',' << FormatMeanStd(ovh) << ','
      << FormatMeanStd(up) << ',' << FormatMeanStd(eps) << ",,\n";
}

std::vector<SummaryRow> ReadSummaryCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("summary: empty file");
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header != SummaryColumns()) {
    throw std::runtime_error("summary: unexpected header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = SplitCsvLine(line);
    f.resize(header.size());
    if (f[0] != kSummaryFormat) {
      throw std::runtime_error("summary: unknown format '" + f[0] + "'");
    }
    if (f[2] == "aggregate") continue;
    SummaryRow r;
    r.preset = f[1];
    r.seed = std::stoull(f[2]);
    r.ok = f[3] == "ok";
    r.error = f[12];
    if (r.ok) {
      r.final_metric = std::stod(f[4]);
      if (!f[5].empty()) r.convergence_rounds = std::stoull(f[5]);
      r.converged = f[6] == "true";
      r.throughput = std::stod(f[7]);
      r.overhead = std::stod(f[8]);
      r.uplink_ratio = std::stod(f[9]);
      if (!f[10].empty()) r.eps_spent = std::stod(f[10]);
      r.rounds = std::stoull(f[11]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

RunReport RunExperimentConfig(const ExperimentConfig& config, std::ostream* log) {
  if (const auto errors = ValidateConfig(config); !errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  RunReport report;
  report.dir = config.output_dir;
  fs::create_directories(report.dir);
  {
    std::ofstream out(report.dir / "config.json");
    out << ToJson(config).dump(2) << '\n';
  }
  {
    const data::Dataset ds = LoadWorkload(config.workload);
    const stats::Metric metric = ResolveMetric(config, ResolveModel(config, ds));
    json meta = {{"format", "fedbench-meta/1"},
                 {"metric", stats::ToString(metric)},
                 {"higher_is_better", stats::HigherIsBetter(metric)}};
    std::ofstream out(report.dir / "meta.json");
    out << meta.dump(2) << '\n';
  }
  for (std::size_t i = 0; i < config.repetitions; ++i) {
    const std::uint64_t seed = config.base_seed + i;
    const std::string tag = std::to_string(seed);
    std::ofstream jsonl(report.dir / ("run_" + tag + ".jsonl"));
    std::ofstream ledger(report.dir / ("ledger_" + tag + ".csv"));
    const auto& lcols = LedgerColumns();
    for (std::size_t k = 0; k < lcols.size(); ++k) {
      ledger << (k ? "," : "") << lcols[k];
    }
    ledger << '\n';
    auto observer = [&](const fl::RoundResult& r) {
      jsonl << RoundRecord(r).dump() << '\n';
      for (const fl::ActorDelta& a : r.actors) {
        ledger << kLedgerFormat << ',' << r.round << ','
               << netsim::ActorName(a.actor);
        for (std::size_t b = 0; b < netsim::kNumBuckets; ++b) {
          ledger << ',' << Num(netsim::ToSeconds(a.buckets.ticks[b]));
        }
        ledger << ',' << a.bytes_up << ',' << a.bytes_down << '\n';
      }
    };
    SummaryRow row;
    try {
      const fl::ExperimentResult result = RunOnce(config, seed, observer);
      row = MakeSummaryRow(config, seed, result);
      if (!result.privacy_rows.empty()) {
        std::ofstream priv(report.dir / ("privacy_" + tag + ".csv"));
        priv << "format,round,q,sigma,epsilon\n";
        for (const auto& p : result.privacy_rows) {
          priv << kPrivacyFormat << ',' << p.round << ',' << Num(p.q) << ','
               << Num(p.sigma) << ',' << Num(p.epsilon) << '\n';
        }
      }
    } catch (const std::exception& e) {
      row = SummaryRow{};
      row.preset = config.name;
      row.seed = seed;
      row.ok = false;
      row.error = e.what();
      report.all_ok = false;
    }
    if (log) {
      *log << config.name << " seed " << seed << ": ";
      if (row.ok) {
        *log << "metric " << Num(row.final_metric) << ", rounds " << row.rounds
             << '\n';
      } else {
        *log << "error: " << row.error << '\n';
      }
    }
    report.rows.push_back(std::move(row));
  }
  std::ofstream summary(report.dir / "summary.csv");
  WriteSummaryCsv(summary, report.rows);
  return report;
}

}  // namespace fedbench::cli
