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

#ifndef FEDBENCH_STATS_BAYES_TTEST_H_
#define FEDBENCH_STATS_BAYES_TTEST_H_

#include <cstddef>
#include <span>

namespace fedbench::stats {

// Posterior mass of the mean difference (A - B) below -rope, inside
// [-rope, rope] and above +rope.
struct ComparisonResult {
  double p_left = 0.0;   // B better
  double p_rope = 0.0;   // practically equal
  double p_right = 0.0;  // A better
  double rope = 0.0;
  std::size_t n = 0;
};

// Bayesian correlated t-test over paired differences. The posterior of the
// mean difference is Student-t with n - 1 degrees of freedom, location the
// sample mean and scale sqrt((1/n + rho/(1-rho)) * s^2). With zero sample
// variance the posterior is a point mass at the mean.
ComparisonResult BayesCorrelatedTTest(std::span<const double> diffs,
                                      double rope, double rho = 0.0);

}  // namespace fedbench::stats

#endif  // FEDBENCH_STATS_BAYES_TTEST_H_
