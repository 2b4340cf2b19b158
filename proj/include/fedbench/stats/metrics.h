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

#ifndef FEDBENCH_STATS_METRICS_H_
#define FEDBENCH_STATS_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fedbench/data/dataset.h"
#include "fedbench/models/mlp.h"

namespace fedbench::stats {

enum class Metric { kTop1, kBinary, kMae, kMse };

Metric ParseMetric(std::string_view name);
std::string_view ToString(Metric m);
// Accuracy-style metrics improve upward, error metrics downward.
bool HigherIsBetter(Metric m);
// The metric a head is evaluated with by default.
Metric DefaultMetric(models::Head head);

// Scores model outputs (head already applied) against labels.
double EvaluateOutputs(const models::DenseMatrix& outputs,
                       std::span<const double> labels, Metric metric);

// Runs the model over the dataset and scores it. Throws when the head does
// not fit the metric (e.g. top1 on a linear head).
double Evaluate(const models::MlpSpec& spec, const models::ParamVector& params,
                const data::Dataset& ds, Metric metric);

inline constexpr int kConvergedReductions = 4;

// 1-based index of the first round whose reduction count reaches 4; nullopt
// when it never does. Throws on a decreasing curve.
std::optional<std::size_t> ConvergenceRounds(std::span<const int> reductions);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample std, n - 1 denominator
  std::size_t n = 0;
};

MeanStd Summarize(std::span<const double> values);

}  // namespace fedbench::stats

#endif  // FEDBENCH_STATS_METRICS_H_
