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

#include "dpate/dataset.h"

#include <cmath>
#include <numeric>

#include "dpate/errors.h"

namespace dpate {

void DomainBounds::CheckValid() const {
  if (x_lo.size() != x_hi.size()) {
    throw DomainError("covariate bounds must have equal dimension");
  }
  for (int j = 0; j < x_lo.size(); ++j) {
    if (!(x_lo[j] <= x_hi[j])) {
      throw DomainError("covariate bounds must satisfy x_lo <= x_hi");
    }
  }
  if (!(y_lo <= y_hi)) {
    throw DomainError("outcome bounds must satisfy y_lo <= y_hi");
  }
}

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXi a, Eigen::VectorXd y,
                 DomainBounds bounds)
    : x_(std::move(x)), a_(std::move(a)), y_(std::move(y)),
      bounds_(std::move(bounds)) {
  bounds_.CheckValid();
  if (a_.size() != x_.rows() || y_.size() != x_.rows()) {
    throw DomainError("treatment and outcome must have one entry per sample");
  }
  if (bounds_.dim() != x_.cols()) {
    throw DomainError("bounds dimension must match the covariate dimension");
  }
}

Sample Dataset::sample(std::int64_t i) const {
  return Sample{x_.row(i).transpose(), a_[i], y_[i]};
}

std::int64_t Dataset::ArmCount(int arm) const {
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < a_.size(); ++i) {
    if (a_[i] == arm) ++count;
  }
  return count;
}

const Dataset& ValidateDataset(const Dataset& d) {
  if (d.size() < 2) {
    throw EmptyDatasetError("dataset must contain at least two samples");
  }
  for (std::int64_t i = 0; i < d.size(); ++i) {
    if (d.a()[i] != 0 && d.a()[i] != 1) throw NonBinaryTreatmentError(i);
    for (int j = 0; j < d.dim(); ++j) {
      const double v = d.x()(i, j);
      if (!(v >= d.bounds().x_lo[j] && v <= d.bounds().x_hi[j])) {
        throw OutOfBoundsError(i, "x" + std::to_string(j + 1), v);
      }
    }
    const double y = d.y()[i];
    if (!(y >= d.bounds().y_lo && y <= d.bounds().y_hi)) {
      throw OutOfBoundsError(i, "y", y);
    }
  }
  return d;
}

namespace {

Dataset Subset(const Dataset& d, const std::vector<std::int64_t>& rows) {
  Eigen::MatrixXd x(rows.size(), d.dim());
  Eigen::VectorXi a(rows.size());
  Eigen::VectorXd y(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    x.row(k) = d.x().row(rows[k]);
    a[k] = d.a()[rows[k]];
    y[k] = d.y()[rows[k]];
  }
  return Dataset(std::move(x), std::move(a), std::move(y), d.bounds());
}

}  // namespace

std::pair<Dataset, Dataset> SplitDataset(const Dataset& d, double fraction,
                                         const RngStream& stream) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw DomainError("split fraction must lie strictly in (0, 1)");
  }
  const std::int64_t n = d.size();
  // Round half up so a 0.5 split of an odd count favours part one.
  const auto k = static_cast<std::int64_t>(
      std::floor(fraction * static_cast<double>(n) + 0.5));
  if (k <= 0 || k >= n) {
    throw DegenerateSplitError("split would leave one part empty");
  }
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  RandomEngine engine(stream);
  engine.Shuffle(order);
  const std::vector<std::int64_t> first(order.begin(), order.begin() + k);
  const std::vector<std::int64_t> second(order.begin() + k, order.end());
  return {Subset(d, first), Subset(d, second)};
}

CsvSchema DefaultSchema(int dim) {
  CsvSchema schema;
  schema.covariates.reserve(dim);
  for (int j = 1; j <= dim; ++j) {
    schema.covariates.push_back("x" + std::to_string(j));
  }
  return schema;
}

}  // namespace dpate
