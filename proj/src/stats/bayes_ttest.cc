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

#include "fedbench/stats/bayes_ttest.h"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace fedbench::stats {

ComparisonResult BayesCorrelatedTTest(std::span<const double> diffs,
                                      double rope, double rho) {
  const std::size_t n = diffs.size();
  if (n < 2) {
    throw std::invalid_argument("BayesCorrelatedTTest: need at least 2 diffs");
  }
  if (!(rope >= 0.0) || !std::isfinite(rope)) {
    throw std::invalid_argument("BayesCorrelatedTTest: rope must be >= 0");
  }
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw std::invalid_argument("BayesCorrelatedTTest: rho must be in [0, 1)");
  }
  double sum = 0.0;
  for (double d : diffs) {
    if (!std::isfinite(d)) {
      throw std::invalid_argument("BayesCorrelatedTTest: non-finite diff");
    }
    sum += d;
  }
  const double nd = static_cast<double>(n);
  const double mean = sum / nd;
  double ss = 0.0;
  for (double d : diffs) ss += (d - mean) * (d - mean);
  const double var = ss / (nd - 1.0);

  ComparisonResult out;
  out.rope = rope;
  out.n = n;
  const double scale = std::sqrt((1.0 / nd + rho / (1.0 - rho)) * var);
  if (scale == 0.0 || !std::isfinite(mean / scale)) {
    if (std::abs(mean) <= rope) {
      out.p_rope = 1.0;
    } else if (mean > rope) {
      out.p_right = 1.0;
    } else {
      out.p_left = 1.0;
    }
    return out;
  }
  const boost::math::students_t_distribution<double> t(nd - 1.0);
  // Both tails are written as lower-tail CDFs of mirrored arguments so that
  // negating every diff swaps them bit for bit.
  out.p_left = boost::math::cdf(t, (-rope - mean) / scale);
  out.p_right = boost::math::cdf(t, (mean - rope) / scale);
  out.p_rope = std::max(0.0, 1.0 - (out.p_left + out.p_right));
  return out;
}

}  // namespace fedbench::stats
