// Copyright 2026 The DP-ATE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dpate/dataset.h"
#include "dpate/errors.h"
#include "dpate/numeric.h"

namespace dpate {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

double ParseCell(const std::string& cell, std::int64_t line) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ParseError(line, "cannot parse '" + cell + "' as a number");
  }
  return value;
}

}  // namespace

CsvLoadResult LoadCsv(const std::string& path, const CsvSchema& schema,
                      const DomainBounds& bounds) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header row");
  const std::vector<std::string> header = SplitLine(line);

  auto column_of = [&](const std::string& name) {
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (header[j] == name) return j;
    }
    throw SchemaError("column '" + name + "' not found in CSV header");
  };

  std::vector<std::size_t> x_cols;
  x_cols.reserve(schema.covariates.size());
  for (const auto& name : schema.covariates) x_cols.push_back(column_of(name));
  const std::size_t a_col = column_of(schema.treatment);
  const std::size_t y_col = column_of(schema.outcome);

  const int p = static_cast<int>(x_cols.size());
  std::vector<Eigen::VectorXd> xs;
  std::vector<int> as;
  std::vector<double> ys;
  std::int64_t dropped = 0;
  std::int64_t line_number = 1;

  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> cells = SplitLine(line);
    if (cells.size() != header.size()) {
      throw ParseError(line_number, "row has " + std::to_string(cells.size()) +
                                        " cells, header has " +
                                        std::to_string(header.size()));
    }
    bool missing = cells[a_col].empty() || cells[y_col].empty();
    for (const std::size_t j : x_cols) missing = missing || cells[j].empty();
    if (missing) {
      ++dropped;
      continue;
    }

    Eigen::VectorXd x(p);
    for (int j = 0; j < p; ++j) x[j] = ParseCell(cells[x_cols[j]], line_number);
    const double a_value = ParseCell(cells[a_col], line_number);
    if (a_value != 0.0 && a_value != 1.0) {
      throw NonBinaryTreatmentError(static_cast<std::int64_t>(as.size()));
    }
    xs.push_back(std::move(x));
    as.push_back(a_value == 1.0 ? 1 : 0);
    ys.push_back(ParseCell(cells[y_col], line_number));
  }

  const auto n = static_cast<std::int64_t>(xs.size());
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXi a(n);
  Eigen::VectorXd y(n);
  for (std::int64_t i = 0; i < n; ++i) {
    x.row(i) = xs[i].transpose();
    a[i] = as[i];
    y[i] = ys[i];
  }
  Dataset dataset(std::move(x), std::move(a), std::move(y), bounds);
  ValidateDataset(dataset);
  return CsvLoadResult{std::move(dataset), dropped};
}

void WriteCsv(const std::string& path, const Dataset& d,
              const CsvSchema& schema) {
  if (static_cast<int>(schema.covariates.size()) != d.dim()) {
    throw SchemaError("schema lists " +
                      std::to_string(schema.covariates.size()) +
                      " covariates, dataset has " + std::to_string(d.dim()));
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open CSV file for writing: " + path);

  for (const auto& name : schema.covariates) out << name << ',';
  out << schema.treatment << ',' << schema.outcome << '\n';
  for (std::int64_t i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.dim(); ++j) out << FormatShortest(d.x()(i, j)) << ',';
    out << d.a()[i] << ',' << FormatShortest(d.y()[i]) << '\n';
  }
  if (!out) throw DataError("failed writing CSV file: " + path);
}

}  // namespace dpate
