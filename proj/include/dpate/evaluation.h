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

#ifndef DPATE_EVALUATION_H_
#define DPATE_EVALUATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dpate/aipw.h"
#include "dpate/dataset.h"
#include "dpate/nuisance.h"
#include "dpate/privacy-budget.h"
#include "dpate/privatize.h"
#include "dpate/random.h"
#include "dpate/sensitivity.h"
#include "dpate/synthetic-data.h"

namespace dpate {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool Contains(double value) const { return value >= lo && value <= hi; }
};

// Non-private sandwich interval around tau_hat.
Interval StandardCi(const ScoreVector& sv, double alpha);

// The private center with the non-private variance: included as a cautionary
// baseline.  It ignores the privatization noise entirely, so it undercovers
// badly whenever that noise is non-negligible.
Interval NaiveCi(double tau_dp, double sigma2_hat, std::int64_t n,
                 double alpha);

// The private center with the non-private variance plus the correction for
// the estimate's noise.  Not a private release (sigma2_hat is unperturbed);
// used to isolate the effect of privatizing the variance.
Interval ValidNaiveCi(double tau_dp, double sigma2_hat, double gamma_tau,
                      std::int64_t n, double eps1, double delta1, double alpha);

// Difference of privatized per-arm clipped means for randomized trials.
// Each arm's mean is released by a Gaussian mechanism with sensitivity
// (y_hi - y_lo) / n_arm under half the budget, and the interval width adds
// the two noise variances to the classical two-sample term.
Interval DpDiffMeansCi(const Dataset& d, const PrivacyBudget& budget,
                       double alpha, const RngStream& stream);

// Percentile bootstrap around the privatized estimate.  Nuisances are fit
// once; each of the `replicates` resampled score means is privatized under
// a (eps2/replicates, delta2/replicates) share so the whole collection
// composes to the variance share of the budget, and the percentile
// interval is re-centred at tau_dp.
Interval BootstrapCi(const Dataset& d, const LearnerConfig& learner,
                     const PrivacyBudget& budget, double alpha, int replicates,
                     const RngStream& stream,
                     const OptimizerConfig& optimizer = {});

enum class Method {
  kStandard,
  kNaive,
  kValidNaive,
  kPrivate,
  kBootstrap,
  kDiffMeans,
};

// Stable identifier used in output tables ("standard", "naive",
// "valid_naive", "private", "bootstrap", "diff_means").
std::string MethodName(Method method);

// Which synthetic design feeds an experiment.
struct DataSource {
  GeneratorSpec spec = Dataset1Spec();
  bool rct = false;
  std::int64_t n = 1000;
};

struct ExperimentConfig {
  DataSource source;
  LearnerConfig learner;
  OptimizerConfig optimizer;
  PrivacyBudget budget{0.5, 1e-5, 0.9};
  std::vector<double> alphas{0.2, 0.1, 0.05};
  std::vector<Method> methods{Method::kStandard, Method::kNaive,
                              Method::kPrivate};
  int runs = 200;
  std::uint64_t base_seed = 1;
  int threads = 1;
  int bootstrap_replicates = 100;
};

// Aggregate over runs for one method at one nominal level.
struct CoverageResult {
  std::string method;
  double nominal = 0.0;  // 1 - alpha.
  int runs = 0;
  int hits = 0;
  double coverage = 0.0;
  double se = 0.0;  // Binomial standard error of the coverage estimate.
  double mean_width = 0.0;
};

// One interval from one run.
struct RunMethodRecord {
  Method method = Method::kStandard;
  double alpha = 0.0;
  Interval ci;
  bool hit = false;
};

struct ExperimentResult {
  double tau_true = 0.0;
  // summary[k] covers methods-major, alpha-minor order.
  std::vector<CoverageResult> summary;
  // per_run[r] holds all (method, alpha) records of run r.
  std::vector<std::vector<RunMethodRecord>> per_run;
};

// Monte-Carlo coverage: each run draws a fresh dataset with per-run seed
// base_seed + r, runs the private pipeline once, and evaluates every
// configured method at every level.  Runs are independent and may execute
// on `threads` workers; aggregation follows run order, so results are
// identical regardless of thread count.  A failed run aborts the experiment.
ExperimentResult CoverageExperiment(const ExperimentConfig& config);

enum class SweepAxis { kEpsilon, kN };

// One grid point x method x level.
struct SweepPoint {
  double grid_value = 0.0;
  std::string method;
  double nominal = 0.0;
  int runs = 0;
  double coverage = 0.0;
  double median_width = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kEpsilon;
  std::vector<SweepPoint> points;
};

// Repeats the coverage experiment along one axis.  The same base seed is
// used at every grid point, so run r sees the same dataset and the same
// noise draws across the grid; differences between grid points are then
// attributable to the swept parameter alone.
SweepResult Sweep(SweepAxis axis, const std::vector<double>& grid,
                  const ExperimentConfig& base);

// Privacy-utility trade-off point.  The utility at weight w is
//   w * (1 - eps/eps_max) + (1 - w) * (1 - width/width_max),
// normalized over the sweep, so every value lies in [0, 1].
struct UtilityPoint {
  double epsilon = 0.0;
  double weight = 0.0;
  std::string method;
  double median_width = 0.0;
  double utility = 0.0;
};

// Maps an epsilon sweep (at a single nominal level) to utility values for
// each weight in `weights`.
std::vector<UtilityPoint> UtilityCurve(const SweepResult& sweep,
                                       const std::vector<double>& weights);

}  // namespace dpate

#endif  // DPATE_EVALUATION_H_
