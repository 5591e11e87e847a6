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

#include "dpate/errors.h"

#include <sstream>

namespace dpate {

namespace {

std::string OutOfBoundsMessage(std::int64_t sample_index,
                               const std::string& coordinate, double value) {
  std::ostringstream os;
  os << "sample " << sample_index << ": coordinate " << coordinate
     << " = " << value << " lies outside the declared domain bounds";
  return os.str();
}

}  // namespace

OutOfBoundsError::OutOfBoundsError(std::int64_t sample_index,
                                   const std::string& coordinate, double value)
    : DataError(OutOfBoundsMessage(sample_index, coordinate, value)),
      sample_index_(sample_index),
      coordinate_(coordinate) {}

NonBinaryTreatmentError::NonBinaryTreatmentError(std::int64_t sample_index)
    : DataError("sample " + std::to_string(sample_index) +
                ": treatment indicator must be 0 or 1"),
      sample_index_(sample_index) {}

ParseError::ParseError(std::int64_t line, const std::string& what)
    : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

NonFiniteObjectiveError::NonFiniteObjectiveError(
    const std::string& point_description)
    : DataError("sensitivity objective is non-finite at " +
                point_description) {}

}  // namespace dpate
