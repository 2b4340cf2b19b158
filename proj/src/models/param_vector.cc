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

#include "fedbench/models/param_vector.h"

namespace fedbench::models {

ParamVector ParamVector::ZerosLike() const {
  ParamVector out;
  out.values.assign(values.size(), 0.0);
  out.segments = segments;
  return out;
}

bool ParamVector::SameLayout(const ParamVector& other) const {
  return values.size() == other.values.size() && segments == other.segments;
}

}  // namespace fedbench::models
