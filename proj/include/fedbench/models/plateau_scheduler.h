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

#ifndef FEDBENCH_MODELS_PLATEAU_SCHEDULER_H_
#define FEDBENCH_MODELS_PLATEAU_SCHEDULER_H_

#include <cstddef>
#include <optional>

namespace fedbench::models {

enum class PlateauMode { kMin, kMax };

struct PlateauConfig {
  double factor = 0.1;
  std::size_t patience = 10;
  PlateauMode mode = PlateauMode::kMin;
  // A metric counts as an improvement only when better than the best so far
  // by more than this.
  double threshold = 1e-6;
};

struct PlateauStep {
  double lr = 0.0;
  bool reduced = false;
  int reduction_count = 0;
};

// Reduce-on-plateau. One Step per evaluation; after `patience` consecutive
// non-improving steps the lr is multiplied by `factor` and the wait resets.
class PlateauScheduler {
 public:
  PlateauScheduler(double initial_lr, PlateauConfig config);

  PlateauStep Step(double metric);

  double lr() const { return lr_; }
  int reduction_count() const { return reductions_; }
  std::size_t steps_since_improvement() const { return bad_steps_; }
  std::optional<double> best() const { return best_; }

 private:
  bool Improves(double metric) const;

  PlateauConfig config_;
  double lr_;
  std::optional<double> best_;
  std::size_t bad_steps_ = 0;
  int reductions_ = 0;
};

}  // namespace fedbench::models

#endif  // FEDBENCH_MODELS_PLATEAU_SCHEDULER_H_
