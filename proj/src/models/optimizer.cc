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

#include "fedbench/models/optimizer.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fedbench/numkit/vector_ops.h"

namespace fedbench::models {

OptimizerKind ParseOptimizerKind(std::string_view name) {
  if (name == "sgd" || name == "sgd-momentum") {
    return OptimizerKind::kSgdMomentum;
  }
  if (name == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) + "'");
}

OptimizerState::OptimizerState(OptimizerConfig config, std::size_t num_params)
    : config_(config), first_(num_params, 0.0) {
  if (config_.kind == OptimizerKind::kAdam) second_.assign(num_params, 0.0);
}

void OptimizerState::Step(std::span<double> params,
                          std::span<const double> grad) {
  if (params.size() != first_.size() || grad.size() != first_.size()) {
    throw std::invalid_argument("OptimizerState::Step: size mismatch");
  }
  if (!numkit::AllFinite(grad)) {
    throw std::invalid_argument("OptimizerState::Step: non-finite gradient");
  }
  ++steps_;
  const double lr = config_.lr;
  if (config_.kind == OptimizerKind::kSgdMomentum) {
    const double m = config_.momentum;
    for (std::size_t i = 0; i < params.size(); ++i) {
      first_[i] = m * first_[i] + grad[i];
      params[i] -= lr * first_[i];
    }
    return;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    first_[i] = b1 * first_[i] + (1.0 - b1) * grad[i];
    second_[i] = b2 * second_[i] + (1.0 - b2) * grad[i] * grad[i];
    const double mhat = first_[i] / c1;
    const double vhat = second_[i] / c2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + config_.epsilon);
  }
}

}  // namespace fedbench::models
