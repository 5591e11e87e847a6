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

#ifndef DPATE_NUMERIC_H_
#define DPATE_NUMERIC_H_

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

#include "dpate/errors.h"

namespace dpate {

// Sums values[begin, begin+count) by recursive halving.  Pairwise summation
// keeps the reduction order independent of any parallel partitioning of the
// callers, so repeated runs produce bit-identical results.
template <typename Accessor>
double PairwiseSum(const Accessor& values, std::int64_t begin,
                   std::int64_t count) {
  constexpr std::int64_t kBlock = 32;
  if (count <= kBlock) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < count; ++i) sum += values(begin + i);
    return sum;
  }
  const std::int64_t half = count / 2;
  return PairwiseSum(values, begin, half) +
         PairwiseSum(values, begin + half, count - half);
}

template <typename Accessor>
double PairwiseMean(const Accessor& values, std::int64_t count) {
  return PairwiseSum(values, 0, count) / static_cast<double>(count);
}

// Median with the usual midpoint convention for even lengths.
inline double Median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Linear-interpolation quantile of a sorted sequence at level q in [0, 1];
// the same convention as R's default (type 7).
inline double SortedQuantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sequence");
  if (q < 0.0 || q > 1.0) throw DomainError("quantile level outside [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Shortest decimal representation that parses back to the same double.
// Used everywhere a number enters a text artifact, so equal values always
// produce equal bytes.
inline std::string FormatShortest(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace dpate

#endif  // DPATE_NUMERIC_H_
