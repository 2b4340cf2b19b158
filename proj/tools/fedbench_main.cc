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

// Command-line driver: run, report, list-presets, show-preset, gen-data.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fedbench/cli/config.h"
#include "fedbench/cli/experiment.h"
#include "fedbench/cli/presets.h"
#include "fedbench/cli/report.h"
#include "fedbench/cli/runner.h"
#include "fedbench/data/csv.h"
#include "json.hpp"

namespace {

using fedbench::cli::ExperimentConfig;

constexpr std::string_view kPresetPrefix = "preset:";

ExperimentConfig ResolveConfig(const std::string& arg) {
  if (arg.rfind(kPresetPrefix, 0) == 0) {
    return fedbench::cli::Preset(arg.substr(kPresetPrefix.size()));
  }
  return fedbench::cli::LoadConfigFile(arg);
}

int Run(const std::string& config_arg, const std::string& out_dir, int reps,
        long long seed) {
  ExperimentConfig config = ResolveConfig(config_arg);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (reps > 0) config.repetitions = static_cast<std::size_t>(reps);
  if (seed >= 0) config.base_seed = static_cast<std::uint64_t>(seed);
  const auto report = fedbench::cli::RunExperimentConfig(config, &std::cout);
  std::cout << "wrote " << report.rows.size() << " run(s) to "
            << report.dir.string() << '\n';
  return report.all_ok ? 0 : 1;
}

int Report(const std::vector<std::string>& dirs, double rope, double rho,
           const std::string& out_path) {
  std::vector<fedbench::cli::RunSet> sets;
  for (const auto& d : dirs) sets.push_back(fedbench::cli::LoadRunSet(d));
  const auto comparisons = fedbench::cli::CompareRunSets(sets, rope, rho);
  const std::string text = fedbench::cli::RenderReport(sets, comparisons);
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
  return 0;
}

int GenData(const std::string& spec_path, const std::string& out_path) {
  std::ifstream in(spec_path);
  if (!in) throw std::runtime_error("cannot open " + spec_path);
  const nlohmann::json doc = nlohmann::json::parse(in);
  const nlohmann::json& workload = doc.contains("workload") ? doc.at("workload") : doc;
  const auto ds =
      fedbench::cli::LoadWorkload(fedbench::cli::ParseWorkloadJson(workload));
  if (out_path.empty() || out_path == "-") {
    fedbench::data::WriteCsv(std::cout, ds);
  } else {
    fedbench::data::WriteCsvFile(out_path, ds);
    std::cerr << "wrote " << ds.size() << " rows to " << out_path << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic federated-learning systems benchmark"};
  app.require_subcommand(1);

  std::string config_arg;
  std::string run_out;
  int run_reps = 0;
  long long run_seed = -1;
  auto* run = app.add_subcommand("run", "Run a config file or preset:<name>");
  run->add_option("config", config_arg, "Config path or preset:<name>")->required();
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--reps", run_reps, "Override the repetition count");
  run->add_option("--seed", run_seed, "Override the base seed");

  std::vector<std::string> report_dirs;
  double rope = fedbench::cli::kDefaultAccuracyRope;
  double rho = 0.0;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Compare run directories");
  report->add_option("dirs", report_dirs, "Run directories")->required()->expected(2, -1);
  report->add_option("--rope", rope, "Rope half-width for the final metric");
  report->add_option("--rho", rho, "Correlation between paired runs, in [0, 1)");
  report->add_option("--out", report_out, "Also write the tables to this file");

  app.add_subcommand("list-presets", "List the reference experiments");

  std::string preset_name;
  auto* show = app.add_subcommand("show-preset", "Print a preset as a config file");
  show->add_option("name", preset_name)->required();

  std::string gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen-data", "Write a synthetic workload as CSV");
  gen->add_option("spec", gen_spec, "JSON workload spec (or a config file)")->required();
  gen->add_option("--out", gen_out, "Output CSV path; '-' for stdout");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return Run(config_arg, run_out, run_reps, run_seed);
    if (report->parsed()) return Report(report_dirs, rope, rho, report_out);
    if (app.got_subcommand("list-presets")) {
      for (const auto& p : fedbench::cli::PresetCatalog()) {
        std::cout << p.name << "\t" << p.summary << '\n';
      }
      return 0;
    }
    if (show->parsed()) {
      std::cout << fedbench::cli::ToJson(fedbench::cli::Preset(preset_name)).dump(2)
                << '\n';
      return 0;
    }
    if (gen->parsed()) return GenData(gen_spec, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
