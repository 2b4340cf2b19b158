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

#include "fedbench/data/csv.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fedbench::data {

namespace {

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string Trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

double ParseNumber(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw std::runtime_error("csv line " + std::to_string(line_no) +
                             ": not a finite number: '" + text + "'");
  }
  return value;
}

}  // namespace

Dataset ReadCsv(std::istream& in, CsvTask task, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
    line.erase(0, 3);
  }
  std::vector<std::string> header = SplitLine(line);
  for (auto& h : header) h = Trim(h);
  if (header.size() < 2) {
    throw std::runtime_error("csv: need at least one feature and a label");
  }
  const std::size_t label_col = header.size() - 1;
  std::size_t key_col = header.size();
  for (std::size_t c = 0; c < label_col; ++c) {
    if (header[c] == "key") key_col = c;
  }
  const std::size_t width =
      label_col - (key_col < header.size() ? 1 : 0);
  if (width == 0) throw std::runtime_error("csv: no feature columns");

  Dataset ds;
  ds.name = name;
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitLine(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": " +
                               std::to_string(fields.size()) +
                               " fields, header has " +
                               std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < label_col; ++c) {
      if (c == key_col) {
        ds.keys.push_back(Trim(fields[c]));
      } else {
        values.push_back(ParseNumber(Trim(fields[c]), line_no));
      }
    }
    ds.labels.push_back(ParseNumber(Trim(fields[label_col]), line_no));
  }
  const std::size_t rows = ds.labels.size();
  ds.features = DenseMatrix(rows, width, std::move(values));
  if (task == CsvTask::kClassification) {
    double top = -1.0;
    for (double y : ds.labels) top = std::max(top, y);
    ds.num_classes = rows == 0 ? 0 : static_cast<std::size_t>(top) + 1;
  }
  ds.Validate();
  return ds;
}

Dataset ReadCsvFile(const std::string& path, CsvTask task) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return ReadCsv(in, task, path);
}

void WriteCsv(std::ostream& out, const Dataset& ds) {
  const bool keyed = !ds.keys.empty();
  if (keyed) out << "key,";
  for (std::size_t c = 0; c < ds.width(); ++c) out << "f" << c << ",";
  out << "label\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    if (keyed) out << ds.keys[r] << ",";
    for (double v : ds.features.row(r)) out << v << ",";
    out << ds.labels[r] << "\n";
  }
}

void WriteCsvFile(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  WriteCsv(out, ds);
}

}  // namespace fedbench::data
