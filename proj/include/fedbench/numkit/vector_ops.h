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

#ifndef FEDBENCH_NUMKIT_VECTOR_OPS_H_
#define FEDBENCH_NUMKIT_VECTOR_OPS_H_

#include <span>
#include <vector>

#include "fedbench/numkit/dense_matrix.h"
#include "fedbench/numkit/rng.h"

namespace fedbench::numkit {

// Euclidean norm. Throws std::invalid_argument on non-finite input.
double L2Norm(std::span<const double> v);
double L2Norm(const DenseMatrix& v);

// Scales v down onto the ball of radius c when ||v|| > c; c must be > 0.
std::vector<double> ClipToNorm(std::span<const double> v, double c);
DenseMatrix ClipToNorm(const DenseMatrix& v, double c);

// Symmetric Dirichlet(alpha, ..., alpha) draw of dimension n.
std::vector<double> SampleDirichlet(double alpha, std::size_t n,
                                    SeededRng& rng);

// y += a * x
void Axpy(double a, std::span<const double> x, std::span<double> y);
double Dot(std::span<const double> a, std::span<const double> b);
bool AllFinite(std::span<const double> v);
double MaxAbsDiff(std::span<const double> a, std::span<const double> b);

}  // namespace fedbench::numkit

#endif  // FEDBENCH_NUMKIT_VECTOR_OPS_H_
