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

#include "fedbench/cli/report.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fedbench/stats/metrics.h"

namespace fedbench::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

std::string Fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

std::string MeanStdCell(const std::vector<double>& v, int digits) {
  if (v.empty()) return "-";
  const stats::MeanStd ms = stats::Summarize(v);
  return Fixed(ms.mean, digits) + " ± " + Fixed(ms.stddev, digits);
}

PairComparison Compare(const RunSet& a, const RunSet& b,
                       const std::string& measure, double rope, double rho,
                       bool higher_is_better) {
  std::map<std::uint64_t, double> av;
  for (const auto& r : a.rows) {
    if (measure == "final_metric") {
      av[r.seed] = r.final_metric;
    } else if (r.convergence_rounds) {
      av[r.seed] = static_cast<double>(*r.convergence_rounds);
    }
  }
  std::vector<double> diffs;
  for (const auto& r : b.rows) {
    std::optional<double> v;
    if (measure == "final_metric") {
      v = r.final_metric;
    } else if (r.convergence_rounds) {
      v = static_cast<double>(*r.convergence_rounds);
    }
    if (auto it = av.find(r.seed); v && it != av.end()) {
      diffs.push_back(it->second - *v);
    }
  }
  PairComparison pc;
  pc.a = a.label;
  pc.b = b.label;
  pc.measure = measure;
  pc.rope = rope;
  pc.pairs = diffs.size();
  if (diffs.size() < 2) return pc;
  const stats::ComparisonResult res = stats::BayesCorrelatedTTest(diffs, rope, rho);
  pc.p_equal = res.p_rope;
  pc.p_a = higher_is_better ? res.p_right : res.p_left;
  pc.p_b = higher_is_better ? res.p_left : res.p_right;
  return pc;
}

}  // namespace

RunSet LoadRunSet(const fs::path& dir) {
  RunSet set;
  set.label = dir.filename().string();
  if (set.label.empty()) set.label = dir.parent_path().filename().string();
  const json config = ReadJson(dir / "config.json");
  set.workload = config.at("workload");
  const json meta = ReadJson(dir / "meta.json");
  set.metric = meta.at("metric").get<std::string>();
  set.higher_is_better = meta.at("higher_is_better").get<bool>();
  std::ifstream in(dir / "summary.csv");
  if (!in) throw std::runtime_error("cannot open " + (dir / "summary.csv").string());
  for (auto& r : ReadSummaryCsv(in)) {
    if (r.ok) set.rows.push_back(std::move(r));
  }
  return set;
}

std::vector<PairComparison> CompareRunSets(const std::vector<RunSet>& sets,
                                           double metric_rope, double rho) {
  if (sets.size() < 2) {
    throw std::invalid_argument("report: need at least two run sets");
  }
  for (const auto& s : sets) {
    if (s.workload != sets.front().workload || s.metric != sets.front().metric) {
      throw std::invalid_argument("report: workload of '" + s.label +
                                  "' differs from '" + sets.front().label + "'");
    }
  }
  std::vector<PairComparison> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      out.push_back(Compare(sets[i], sets[j], "final_metric", metric_rope, rho,
                            sets[i].higher_is_better));
      out.push_back(Compare(sets[i], sets[j], "convergence_rounds",
                            kConvergenceRope, rho, false));
    }
  }
  return out;
}

std::string RenderReport(const std::vector<RunSet>& sets,
                         const std::vector<PairComparison>& comparisons) {
  std::ostringstream out;
  const std::string metric = sets.empty() ? "metric" : sets.front().metric;
  out << "| run set | n | " << metric
      << " | convergence rounds | throughput (samples/s) | overhead | uplink ratio | epsilon |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : sets) {
    std::vector<double> m, c, t, o, u, e;
    for (const auto& r : s.rows) {
      m.push_back(r.final_metric);
      if (r.convergence_rounds) c.push_back(static_cast<double>(*r.convergence_rounds));
      t.push_back(r.throughput);
      o.push_back(r.overhead);
      u.push_back(r.uplink_ratio);
      if (r.eps_spent) e.push_back(*r.eps_spent);
    }
    out << "| " << s.label << " | " << s.rows.size() << " | " << MeanStdCell(m, 4)
        << " | " << MeanStdCell(c, 1) << " | " << MeanStdCell(t, 1) << " | "
        << MeanStdCell(o, 4) << " | " << MeanStdCell(u, 2) << " | "
        << MeanStdCell(e, 3) << " |\n";
  }
  out << "\n| workload | pair | measure | <p_A, p_Equal, p_B> | rope |\n";
  out << "|---|---|---|---|---|\n";
  std::string workload = "custom";
  if (!sets.empty() && sets.front().workload.contains("kind")) {
    workload = sets.front().workload.at("kind").get<std::string>();
  }
  for (const auto& c : comparisons) {
    out << "| " << workload << " | " << c.a << " vs " << c.b << " | " << c.measure
        << " | ";
    if (c.pairs < 2) {
      out << "n/a (" << c.pairs << " paired seeds)";
    } else {
      out << "<" << Fixed(c.p_a, 3) << ", " << Fixed(c.p_equal, 3) << ", "
          << Fixed(c.p_b, 3) << ">";
    }
    out << " | ±" << Fixed(c.rope, c.rope < 1.0 ? 3 : 0) << " |\n";
  }
  return out.str();
}

}  // namespace fedbench::cli
