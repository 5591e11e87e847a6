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

#ifndef DPATE_DATASET_H_
#define DPATE_DATASET_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dpate/random.h"

namespace dpate {

// Known a-priori bounds of the data domain.  Sensitivities are suprema over
// this box, so the bounds are part of the privacy contract: they must be
// fixed before looking at the data.
struct DomainBounds {
  Eigen::VectorXd x_lo;
  Eigen::VectorXd x_hi;
  double y_lo = 0.0;
  double y_hi = 0.0;

  int dim() const { return static_cast<int>(x_lo.size()); }

  // Throws DomainError unless x_lo <= x_hi coordinate-wise and y_lo <= y_hi.
  void CheckValid() const;
};

// One observation: covariates, binary treatment and scalar outcome.
struct Sample {
  Eigen::VectorXd x;
  int a = 0;
  double y = 0.0;
};

// An immutable collection of samples plus their domain bounds, stored
// column-major per field so model code can operate on whole matrices.
class Dataset {
 public:
  // Requires matching row counts; contents are validated separately by
  // ValidateDataset.
  Dataset(Eigen::MatrixXd x, Eigen::VectorXi a, Eigen::VectorXd y,
          DomainBounds bounds);

  std::int64_t size() const { return x_.rows(); }
  int dim() const { return static_cast<int>(x_.cols()); }

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXi& a() const { return a_; }
  const Eigen::VectorXd& y() const { return y_; }
  const DomainBounds& bounds() const { return bounds_; }

  Sample sample(std::int64_t i) const;

  // Number of samples with treatment == arm.
  std::int64_t ArmCount(int arm) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXi a_;
  Eigen::VectorXd y_;
  DomainBounds bounds_;
};

// Checks every sample against the bounds and the treatment coding.  Returns
// the dataset unchanged on success.  Throws EmptyDatasetError (fewer than
// two samples), OutOfBoundsError or NonBinaryTreatmentError.
const Dataset& ValidateDataset(const Dataset& d);

// Disjoint partition by uniform shuffle.  Part one receives
// round(fraction * n) samples, rounding half up.  Throws
// DegenerateSplitError if either part would be empty.
std::pair<Dataset, Dataset> SplitDataset(const Dataset& d, double fraction,
                                         const RngStream& stream);

// Column naming for CSV input and output.  Covariates are read in the order
// listed here.
struct CsvSchema {
  std::vector<std::string> covariates;
  std::string treatment = "a";
  std::string outcome = "y";
};

struct CsvLoadResult {
  Dataset dataset;
  std::int64_t dropped_rows = 0;
};

// Reads a header-first CSV file.  Rows with a missing value in any schema
// column are dropped and counted; any other unparsable cell raises
// ParseError with its line number.  Columns named by the schema must exist
// (SchemaError otherwise).  The result is validated against `bounds`.
CsvLoadResult LoadCsv(const std::string& path, const CsvSchema& schema,
                      const DomainBounds& bounds);

// Writes a dataset in the schema's column order (covariates, treatment,
// outcome).  Values round-trip exactly through LoadCsv.
void WriteCsv(const std::string& path, const Dataset& d,
              const CsvSchema& schema);

// A schema with covariate names x1..xp matching the dataset dimension.
CsvSchema DefaultSchema(int dim);

}  // namespace dpate

#endif  // DPATE_DATASET_H_
