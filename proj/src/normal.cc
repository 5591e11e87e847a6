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

#include "dpate/normal.h"

#include <cmath>

#include "dpate/errors.h"

namespace dpate {
namespace {

// Rational approximation of the standard normal quantile (Acklam's
// coefficients).  Absolute error below 1.2e-9 before refinement.
double QuantileApproximation(double q) {
  static constexpr double kA[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double kB[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double kC[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double kD[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double kLow = 0.02425;

  if (q < kLow) {
    const double r = std::sqrt(-2.0 * std::log(q));
    return (((((kC[0] * r + kC[1]) * r + kC[2]) * r + kC[3]) * r + kC[4]) * r +
            kC[5]) /
           ((((kD[0] * r + kD[1]) * r + kD[2]) * r + kD[3]) * r + 1.0);
  }
  if (q > 1.0 - kLow) {
    const double r = std::sqrt(-2.0 * std::log(1.0 - q));
    return -(((((kC[0] * r + kC[1]) * r + kC[2]) * r + kC[3]) * r + kC[4]) * r +
             kC[5]) /
           ((((kD[0] * r + kD[1]) * r + kD[2]) * r + kD[3]) * r + 1.0);
  }
  const double r = q - 0.5;
  const double s = r * r;
  return (((((kA[0] * s + kA[1]) * s + kA[2]) * s + kA[3]) * s + kA[4]) * s +
          kA[5]) *
         r /
         (((((kB[0] * s + kB[1]) * s + kB[2]) * s + kB[3]) * s + kB[4]) * s +
          1.0);
}

}  // namespace

double NormalCdf(double x) {
  // erfc on the negative half-line avoids cancellation in the lower tail.
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double NormalPdf(double x) {
  static const double kInvSqrt2Pi = 1.0 / std::sqrt(8.0 * std::atan(1.0));
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double NormalQuantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal quantile level must lie strictly in (0, 1)");
  }
  double x = QuantileApproximation(q);
  // One Newton step on the CDF; the density is bounded away from zero
  // relative to the residual wherever the approximation is used.
  const double pdf = NormalPdf(x);
  if (pdf > 0.0) x -= (NormalCdf(x) - q) / pdf;
  return x;
}

}  // namespace dpate
