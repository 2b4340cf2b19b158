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

#include "fedbench/stats/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fedbench::stats {

Metric ParseMetric(std::string_view name) {
  if (name == "top1") return Metric::kTop1;
  if (name == "binary") return Metric::kBinary;
  if (name == "mae") return Metric::kMae;
  if (name == "mse") return Metric::kMse;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::string_view ToString(Metric m) {
  switch (m) {
    case Metric::kTop1:
      return "top1";
    case Metric::kBinary:
      return "binary";
    case Metric::kMae:
      return "mae";
    case Metric::kMse:
      return "mse";
  }
  return "?";
}

bool HigherIsBetter(Metric m) {
  return m == Metric::kTop1 || m == Metric::kBinary;
}

Metric DefaultMetric(models::Head head) {
  switch (head) {
    case models::Head::kSoftmaxCrossEntropy:
      return Metric::kTop1;
    case models::Head::kSigmoidBce:
      return Metric::kBinary;
    case models::Head::kLinearMse:
      return Metric::kMse;
  }
  return Metric::kMse;
}

double EvaluateOutputs(const models::DenseMatrix& outputs,
                       std::span<const double> labels, Metric metric) {
  if (outputs.rows() != labels.size()) {
    throw std::invalid_argument("EvaluateOutputs: row/label count mismatch");
  }
  if (labels.empty()) throw std::invalid_argument("EvaluateOutputs: no rows");
  const double n = static_cast<double>(labels.size());
  double acc = 0.0;
  switch (metric) {
    case Metric::kTop1:
      for (std::size_t r = 0; r < outputs.rows(); ++r) {
        auto row = outputs.row(r);
        const auto best = static_cast<double>(
            std::max_element(row.begin(), row.end()) - row.begin());
        if (best == labels[r]) acc += 1.0;
      }
      return acc / n;
    case Metric::kBinary:
      if (outputs.cols() != 1) {
        throw std::invalid_argument("binary accuracy needs a single output");
      }
      for (std::size_t r = 0; r < outputs.rows(); ++r) {
        const double predicted = outputs(r, 0) >= 0.5 ? 1.0 : 0.0;
        if (predicted == labels[r]) acc += 1.0;
      }
      return acc / n;
    case Metric::kMae:
    case Metric::kMse:
      if (outputs.cols() != 1) {
        throw std::invalid_argument("regression metrics need a single output");
      }
      for (std::size_t r = 0; r < outputs.rows(); ++r) {
        const double d = outputs(r, 0) - labels[r];
        acc += metric == Metric::kMae ? std::abs(d) : d * d;
      }
      return acc / n;
  }
  return 0.0;
}

double Evaluate(const models::MlpSpec& spec, const models::ParamVector& params,
                const data::Dataset& ds, Metric metric) {
  const bool compatible =
      (metric == Metric::kTop1 &&
       spec.head == models::Head::kSoftmaxCrossEntropy) ||
      (metric == Metric::kBinary && spec.head == models::Head::kSigmoidBce) ||
      ((metric == Metric::kMae || metric == Metric::kMse) &&
       spec.head == models::Head::kLinearMse);
  if (!compatible) {
    throw std::invalid_argument("metric " + std::string(ToString(metric)) +
                                " does not fit head " +
                                std::string(models::ToString(spec.head)));
  }
  return EvaluateOutputs(models::Forward(spec, params, ds.features).outputs,
                         ds.labels, metric);
}

std::optional<std::size_t> ConvergenceRounds(std::span<const int> reductions) {
  for (std::size_t i = 1; i < reductions.size(); ++i) {
    if (reductions[i] < reductions[i - 1]) {
      throw std::invalid_argument(
          "ConvergenceRounds: reduction count decreased at round " +
          std::to_string(i + 1));
    }
  }
  for (std::size_t i = 0; i < reductions.size(); ++i) {
    if (reductions[i] >= kConvergedReductions) return i + 1;
  }
  return std::nullopt;
}

MeanStd Summarize(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return out;
}

}  // namespace fedbench::stats
