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

#ifndef DPATE_SENSITIVITY_H_
#define DPATE_SENSITIVITY_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dpate/aipw.h"
#include "dpate/dataset.h"
#include "dpate/nuisance.h"
#include "dpate/random.h"

namespace dpate {

struct OptimizerConfig {
  // Random start points per arm, in addition to any caller-supplied starts.
  int starts = 10;
  int max_iterations = 300;
  // Finite-difference step as a fraction of each coordinate's range.
  double fd_step_scale = 1e-5;
  // Stop when two consecutive accepted steps improve the objective by less
  // than tolerance * (1 + |value|).
  double tolerance = 1e-9;
};

// A candidate point in the data domain: a treatment arm plus (x, y).
struct DomainPoint {
  int arm = 0;
  Eigen::VectorXd x;
  double y = 0.0;
};

// Outcome of one optimizer start, kept for diagnostics.
struct StartRecord {
  int arm = 0;
  int start_index = 0;  // Caller-supplied starts come first, then random.
  double value = 0.0;
  int iterations = 0;
};

struct MaximizeResult {
  double value = 0.0;
  DomainPoint argmax;
  std::vector<StartRecord> trace;
};

// Batch objective over one arm; returns one value per row of x.
using BoxObjective = std::function<Eigen::VectorXd(
    int arm, const Eigen::MatrixXd& x, const Eigen::VectorXd& y)>;

// Maximizes |f| over both arms and the (x, y) box by multistart projected
// gradient ascent with central finite differences and backtracking line
// search.  Starts are drawn up front from the stream, so the search is
// deterministic and the returned value can never fall below |f| at any
// start point.  Ties between starts resolve to the earliest (arm, index).
// Throws NonFiniteObjectiveError if f evaluates to a non-finite value at a
// visited point.
MaximizeResult MaximizeAbsOverDomain(
    const BoxObjective& f, const DomainBounds& bounds,
    const OptimizerConfig& config, const RngStream& stream,
    const std::vector<DomainPoint>& extra_starts = {});

// Gross-error sensitivity of the ATE estimate: sup over the domain of
// |Gamma(z) - tau_hat|.  Each arm's best-scoring training sample seeds an
// extra start, so the result dominates max_i |Gamma(z_i) - tau_hat|.
MaximizeResult GammaTau(const NuisanceModel& model, const ScoreVector& sv,
                        const Dataset& d, const OptimizerConfig& config,
                        const RngStream& stream);

// Gross-error sensitivity of the sandwich variance: sup over the domain of
// |(Gamma(z) - tau_hat)^2 - sigma2_hat|.
MaximizeResult GammaSigma(const NuisanceModel& model, const ScoreVector& sv,
                          const Dataset& d, const OptimizerConfig& config,
                          const RngStream& stream);

// Both sensitivities plus their argmax points and optimizer traces.
struct SensitivityReport {
  double gamma_tau = 0.0;
  double gamma_sigma = 0.0;
  DomainPoint argmax_tau;
  DomainPoint argmax_sigma;
  std::vector<StartRecord> trace_tau;
  std::vector<StartRecord> trace_sigma;
};

SensitivityReport ComputeSensitivities(const NuisanceModel& model,
                                       const ScoreVector& sv, const Dataset& d,
                                       const OptimizerConfig& config,
                                       const RngStream& stream);

// Noise scale for a statistic with gross-error sensitivity gamma at sample
// size n under an (eps, delta) share:
//   gamma * 5 * sqrt(2 * ln(n) * ln(2/delta)) / (eps * n).
// Requires gamma >= 0, n >= 2, eps > 0 and delta in (0, 1).
double SmoothScale(double gamma, std::int64_t n, double eps, double delta);

}  // namespace dpate

#endif  // DPATE_SENSITIVITY_H_
