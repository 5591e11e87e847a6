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

#ifndef DPATE_NORMAL_H_
#define DPATE_NORMAL_H_

namespace dpate {

// CDF of the standard normal distribution.
double NormalCdf(double x);

// Density of the standard normal distribution.
double NormalPdf(double x);

// Quantile (inverse CDF) of the standard normal distribution, accurate to
// better than 1e-9 everywhere on (0, 1).  A rational approximation supplies
// the starting point and one Newton step on the CDF refines it.
//
// Throws DomainError unless 0 < q < 1.
double NormalQuantile(double q);

}  // namespace dpate

#endif  // DPATE_NORMAL_H_
