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

#include "fedbench/models/plateau_scheduler.h"

#include <cmath>
#include <stdexcept>

namespace fedbench::models {

PlateauScheduler::PlateauScheduler(double initial_lr, PlateauConfig config)
    : config_(config), lr_(initial_lr) {
  if (!(config_.factor > 0.0 && config_.factor < 1.0)) {
    throw std::invalid_argument("PlateauScheduler: factor must be in (0,1)");
  }
  if (config_.patience == 0) {
    throw std::invalid_argument("PlateauScheduler: patience must be >= 1");
  }
}

bool PlateauScheduler::Improves(double metric) const {
  if (!best_) return true;
  return config_.mode == PlateauMode::kMin
             ? metric < *best_ - config_.threshold
             : metric > *best_ + config_.threshold;
}

PlateauStep PlateauScheduler::Step(double metric) {
  if (!std::isfinite(metric)) {
    // A diverged metric never counts as an improvement.
    ++bad_steps_;
  } else if (Improves(metric)) {
    best_ = metric;
    bad_steps_ = 0;
  } else {
    ++bad_steps_;
  }
  PlateauStep out;
  if (bad_steps_ >= config_.patience) {
    lr_ *= config_.factor;
    ++reductions_;
    bad_steps_ = 0;
    out.reduced = true;
  }
  out.lr = lr_;
  out.reduction_count = reductions_;
  return out;
}

}  // namespace fedbench::models
