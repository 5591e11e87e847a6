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

#ifndef DPATE_PRIVACY_BUDGET_H_
#define DPATE_PRIVACY_BUDGET_H_

namespace dpate {

// A total (epsilon, delta) budget plus the fraction reserved for the point
// estimate; the remainder privatizes the variance.  Construction validates
// epsilon > 0, delta in (0, 1) and ate_fraction in (0, 1), throwing
// InvalidBudgetError otherwise.
class PrivacyBudget {
 public:
  PrivacyBudget(double epsilon, double delta, double ate_fraction);

  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double ate_fraction() const { return ate_fraction_; }

 private:
  double epsilon_;
  double delta_;
  double ate_fraction_;
};

// The two sequentially composed sub-budgets.
struct BudgetSplit {
  double eps1 = 0.0;
  double delta1 = 0.0;
  double eps2 = 0.0;
  double delta2 = 0.0;
};

// Splits the budget so that eps1 + eps2 == epsilon and delta1 + delta2 ==
// delta exactly in floating point: the first share is rounded once and the
// second is the exact remainder.
BudgetSplit SplitBudget(const PrivacyBudget& budget);

}  // namespace dpate

#endif  // DPATE_PRIVACY_BUDGET_H_
