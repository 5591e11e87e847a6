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

#ifndef DPATE_AIPW_H_
#define DPATE_AIPW_H_

#include <cstdint>

#include <Eigen/Dense>

#include "dpate/dataset.h"
#include "dpate/nuisance.h"

namespace dpate {

// Per-sample doubly robust scores together with their mean (the ATE
// estimate) and the empirical variance of the score around that mean.
struct ScoreVector {
  Eigen::VectorXd gamma;
  double tau_hat = 0.0;
  double sigma2_hat = 0.0;
};

// Doubly robust score from raw nuisance values, written as an
// inverse-propensity term plus an augmentation in (a - pi):
//   (a/pi - (1-a)/(1-pi)) * y
//     - ((1-pi)*mu1 + pi*mu0) / (pi*(1-pi)) * (a - pi).
double ScoreGamma(int a, double y, double pi, double mu0, double mu1);

// The same quantity in its textbook regression-plus-correction form:
//   mu1 - mu0 + a*(y - mu1)/pi - (1-a)*(y - mu0)/(1-pi).
// Kept as an independent route for cross-checking ScoreGamma; the two agree
// to floating-point accuracy for every input.
double ScoreCanonical(int a, double y, double pi, double mu0, double mu1);

// Scores a single observation under the fitted nuisances.
double ScoreGamma(const NuisanceModel& model, const Sample& z);
double ScoreCanonical(const NuisanceModel& model, const Sample& z);

// Scores a batch of points that all carry the same treatment value.  Used
// by the sensitivity search, which explores each arm separately.
Eigen::VectorXd ScoreGammaBatch(const NuisanceModel& model, int arm,
                                const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& y);

// Scores every sample and aggregates with pairwise summation, so the result
// does not depend on how callers might partition the work.
ScoreVector EstimateAte(const NuisanceModel& model, const Dataset& d);

// Builds a ScoreVector from precomputed scores (mean and variance filled
// in).  Requires at least one score.
ScoreVector ScoreVectorFromGamma(Eigen::VectorXd gamma);

// Influence of sample i on the ATE estimate: gamma[i] - tau_hat.
double InfluenceAte(const ScoreVector& sv, std::int64_t i);

// The empirical sandwich variance (1/n) * sum (gamma_i - tau_hat)^2.
double SandwichVariance(const ScoreVector& sv);

// Influence of an observation z on the sandwich variance:
// (Gamma(z) - tau_hat)^2 - sigma2_hat.
double InfluenceVariance(const ScoreVector& sv, const NuisanceModel& model,
                         const Sample& z);

}  // namespace dpate

#endif  // DPATE_AIPW_H_
