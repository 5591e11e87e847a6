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

#include "dpate/privacy-budget.h"

#include <cmath>

#include "dpate/errors.h"

namespace dpate {

PrivacyBudget::PrivacyBudget(double epsilon, double delta, double ate_fraction)
    : epsilon_(epsilon), delta_(delta), ate_fraction_(ate_fraction) {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
    throw InvalidBudgetError("epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidBudgetError("delta must lie strictly in (0, 1)");
  }
  if (!(ate_fraction > 0.0 && ate_fraction < 1.0)) {
    throw InvalidBudgetError("ate_fraction must lie strictly in (0, 1)");
  }
}

namespace {

// Splits total into two nonnegative shares that recompose to the total
// exactly in double arithmetic.  The remainder after the raw product is
// computed first; re-deriving the first share from that remainder makes the
// pair exact: when the product is at least half the total the first
// subtraction is already exact (Sterbenz), and otherwise the remainder
// exceeds half the total so the second subtraction is the exact one.  The
// first share moves by at most one ulp from fraction * total.
void PairExact(double total, double fraction, double* first, double* second) {
  const double raw = fraction * total;
  *second = total - raw;
  *first = total - *second;
}

}  // namespace

BudgetSplit SplitBudget(const PrivacyBudget& budget) {
  BudgetSplit split;
  PairExact(budget.epsilon(), budget.ate_fraction(), &split.eps1, &split.eps2);
  PairExact(budget.delta(), budget.ate_fraction(), &split.delta1,
            &split.delta2);
  return split;
}

}  // namespace dpate
