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

#ifndef FEDBENCH_MODELS_OPTIMIZER_H_
#define FEDBENCH_MODELS_OPTIMIZER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fedbench::models {

enum class OptimizerKind { kSgdMomentum, kAdam };

OptimizerKind ParseOptimizerKind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgdMomentum;
  double lr = 0.1;
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Momentum SGD (v <- m*v + g; w <- w - lr*v) or Adam with bias correction.
class OptimizerState {
 public:
  OptimizerState(OptimizerConfig config, std::size_t num_params);

  // Applies one update in place. Throws on non-finite gradients or size
  // mismatch; params are untouched in that case.
  void Step(std::span<double> params, std::span<const double> grad);

  double lr() const { return config_.lr; }
  void set_lr(double lr) { config_.lr = lr; }
  std::uint64_t step_count() const { return steps_; }
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  std::uint64_t steps_ = 0;
  std::vector<double> first_;   // momentum buffer or Adam m
  std::vector<double> second_;  // Adam v
};

}  // namespace fedbench::models

#endif  // FEDBENCH_MODELS_OPTIMIZER_H_
