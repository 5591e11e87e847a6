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

#ifndef DPATE_ERRORS_H_
#define DPATE_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dpate {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A problem with user-supplied configuration (flags, config file, budget or
// schema parameters).  The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A problem arising from the data or from numerical computation at run time.
// The CLI maps these to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Dataset has too few samples to estimate anything.
class EmptyDatasetError : public DataError {
 public:
  using DataError::DataError;
};

// A sample coordinate lies outside the declared domain bounds.
class OutOfBoundsError : public DataError {
 public:
  OutOfBoundsError(std::int64_t sample_index, const std::string& coordinate,
                   double value);
  std::int64_t sample_index() const { return sample_index_; }
  const std::string& coordinate() const { return coordinate_; }

 private:
  std::int64_t sample_index_;
  std::string coordinate_;
};

// A treatment indicator is not 0 or 1.
class NonBinaryTreatmentError : public DataError {
 public:
  explicit NonBinaryTreatmentError(std::int64_t sample_index);
  std::int64_t sample_index() const { return sample_index_; }

 private:
  std::int64_t sample_index_;
};

// A requested dataset split would leave one part empty.
class DegenerateSplitError : public DataError {
 public:
  using DataError::DataError;
};

// A CSV cell could not be parsed as a number.
class ParseError : public DataError {
 public:
  ParseError(std::int64_t line, const std::string& what);
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

// A configured column is missing from the CSV header, or required schema
// information (such as domain bounds) was not supplied.
class SchemaError : public ConfigError {
 public:
  explicit SchemaError(const std::string& what) : ConfigError(what) {}
};

// All samples carry the same treatment, so per-arm models cannot be fit.
class SingleArmError : public DataError {
 public:
  using DataError::DataError;
};

// A linear system arising in model fitting could not be solved.
class LinearSolveError : public DataError {
 public:
  using DataError::DataError;
};

// A training loss became non-finite.
class NonFiniteLossError : public DataError {
 public:
  using DataError::DataError;
};

// The sensitivity objective evaluated to a non-finite value.
class NonFiniteObjectiveError : public DataError {
 public:
  explicit NonFiniteObjectiveError(const std::string& point_description);
};

// Privacy parameters outside their valid ranges.
class InvalidBudgetError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A numeric argument outside its mathematical domain (e.g. a quantile level
// not in (0, 1)).
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace dpate

#endif  // DPATE_ERRORS_H_
