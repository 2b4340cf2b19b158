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

#include "fedbench/numkit/vector_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fedbench::numkit {

double L2Norm(std::span<const double> v) {
  // Scaled accumulation so huge-but-finite entries do not overflow.
  double scale = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("L2Norm: non-finite");
    scale = std::max(scale, std::abs(x));
  }
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) {
    const double y = x / scale;
    acc += y * y;
  }
  return scale * std::sqrt(acc);
}

double L2Norm(const DenseMatrix& v) { return L2Norm(v.values()); }

std::vector<double> ClipToNorm(std::span<const double> v, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("ClipToNorm: c must be > 0");
  std::vector<double> out(v.begin(), v.end());
  const double norm = L2Norm(v);
  if (norm > c) {
    const double f = c / norm;
    for (double& x : out) x *= f;
  }
  return out;
}

DenseMatrix ClipToNorm(const DenseMatrix& v, double c) {
  return DenseMatrix(v.rows(), v.cols(), ClipToNorm(v.values(), c));
}

std::vector<double> SampleDirichlet(double alpha, std::size_t n,
                                    SeededRng& rng) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("SampleDirichlet: alpha must be > 0");
  }
  if (n == 0) throw std::invalid_argument("SampleDirichlet: n must be >= 1");
  if (n == 1) return {1.0};
  // Work with log-gammas; for small alpha the raw draws underflow to zero.
  std::vector<double> logs(n);
  for (double& l : logs) l = rng.LogGamma(alpha);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = std::exp(logs[i] - top);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

void Axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("Axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("Dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

}  // namespace fedbench::numkit
