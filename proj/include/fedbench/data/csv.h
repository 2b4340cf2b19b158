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

#ifndef FEDBENCH_DATA_CSV_H_
#define FEDBENCH_DATA_CSV_H_

#include <iosfwd>
#include <string>

#include "fedbench/data/dataset.h"

namespace fedbench::data {

enum class CsvTask { kClassification, kRegression };

// Header row required; the last column is the label and a column named
// "key" (any position except last) is taken as the join key. Fields are
// plain comma-separated values without quoting.
Dataset ReadCsv(std::istream& in, CsvTask task, const std::string& name);
Dataset ReadCsvFile(const std::string& path, CsvTask task);

// Inverse of ReadCsv: key (when present), f0..f{d-1}, label.
void WriteCsv(std::ostream& out, const Dataset& ds);
void WriteCsvFile(const std::string& path, const Dataset& ds);

}  // namespace fedbench::data

#endif  // FEDBENCH_DATA_CSV_H_
