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

#ifndef DPATE_PRIVATIZE_H_
#define DPATE_PRIVATIZE_H_

#include <cstdint>
#include <string>
#include <utility>

#include "dpate/aipw.h"
#include "dpate/dataset.h"
#include "dpate/nuisance.h"
#include "dpate/privacy-budget.h"
#include "dpate/random.h"
#include "dpate/sensitivity.h"

namespace dpate {

// One standard normal draw from the engine.
double GaussianNoise(RandomEngine& engine);

// The privatized point estimate together with the noise scale that was
// added: tau_dp = tau_hat + r_tau * noise.
struct AteRelease {
  double tau_dp = 0.0;
  double r_tau = 0.0;
};

AteRelease PrivatizeAte(double tau_hat, double gamma_tau, std::int64_t n,
                        double eps1, double delta1, double noise);
AteRelease PrivatizeAte(double tau_hat, double gamma_tau, std::int64_t n,
                        double eps1, double delta1, RandomEngine& engine);

// Noisy variance truncated at zero: max(0, sigma2_hat + r_sigma * noise).
// Truncation is post-processing and costs no additional budget.
double PrivatizeVariance(double sigma2_hat, double gamma_sigma, std::int64_t n,
                         double eps2, double delta2, double noise);
double PrivatizeVariance(double sigma2_hat, double gamma_sigma, std::int64_t n,
                         double eps2, double delta2, RandomEngine& engine);

// Inflates the privatized variance by the variance of the noise that was
// added to the point estimate, so the interval accounts for both sampling
// and privatization randomness:
//   sigma2_dp + gamma_tau^2 * 50 * ln(n) * ln(2/delta1) / (n * eps1^2),
// where the second term equals n * r_tau^2.
double AugmentedVariance(double sigma2_dp, double gamma_tau, std::int64_t n,
                         double eps1, double delta1);

// Two-sided normal interval: tau_dp +/- z_{1-alpha/2} * sqrt(v_dp / n).
// Requires alpha in (0, 1) and v_dp >= 0.
std::pair<double, double> DpConfidenceInterval(double tau_dp, double v_dp,
                                               std::int64_t n, double alpha);

// Everything released (plus internal diagnostics) by one private run.
struct DpAteReport {
  double tau_dp = 0.0;
  double sigma2_dp = 0.0;
  double v_dp = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double alpha = 0.05;
  double epsilon = 0.0;
  double delta = 0.0;
  double ate_fraction = 0.0;
  BudgetSplit split;
  double r_tau = 0.0;
  double r_sigma = 0.0;
  // Computed from the fitted nuisances, not from raw data, but still
  // data-dependent: diagnostics, not part of the private release.
  double gamma_tau = 0.0;
  double gamma_sigma = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string config_digest;
};

// Serializes a report as JSON with a fixed key order, so identical reports
// produce byte-identical output.
std::string ReportToJson(const DpAteReport& report);

// Full pipeline output including the non-private intermediates needed by
// evaluation code.  The intermediates must never leave the process in a
// release context.
struct PipelineResult {
  DpAteReport report;
  ScoreVector scores;
  SensitivityReport sensitivity;
  NuisanceModel model;
};

// Runs the complete private estimation pipeline: (optionally) split the
// data, fit nuisances, score, bound sensitivities, add noise to both the
// estimate and its variance, and form the augmented-variance interval.
// The result is a deterministic function of (d, configs, stream).
PipelineResult EstimatePrivateDetailed(const Dataset& d,
                                       const LearnerConfig& learner,
                                       const OptimizerConfig& optimizer,
                                       const PrivacyBudget& budget,
                                       double alpha, const RngStream& stream);

DpAteReport EstimatePrivate(const Dataset& d, const LearnerConfig& learner,
                            const PrivacyBudget& budget, double alpha,
                            const RngStream& stream,
                            const OptimizerConfig& optimizer = {});

}  // namespace dpate

#endif  // DPATE_PRIVATIZE_H_
