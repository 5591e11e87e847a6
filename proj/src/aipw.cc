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

#include "dpate/aipw.h"

#include "dpate/errors.h"
#include "dpate/numeric.h"

namespace dpate {

double ScoreGamma(int a, double y, double pi, double mu0, double mu1) {
  const double ipw = (a == 1 ? 1.0 / pi : -1.0 / (1.0 - pi)) * y;
  const double augmentation =
      ((1.0 - pi) * mu1 + pi * mu0) / (pi * (1.0 - pi));
  return ipw - augmentation * (static_cast<double>(a) - pi);
}

double ScoreCanonical(int a, double y, double pi, double mu0, double mu1) {
  const double correction =
      a == 1 ? (y - mu1) / pi : -(y - mu0) / (1.0 - pi);
  return mu1 - mu0 + correction;
}

double ScoreGamma(const NuisanceModel& model, const Sample& z) {
  const Eigen::MatrixXd x = z.x.transpose();
  return ScoreGamma(z.a, z.y, model.Propensity(x)[0], model.Outcome(x, 0)[0],
                    model.Outcome(x, 1)[0]);
}

double ScoreCanonical(const NuisanceModel& model, const Sample& z) {
  const Eigen::MatrixXd x = z.x.transpose();
  return ScoreCanonical(z.a, z.y, model.Propensity(x)[0],
                        model.Outcome(x, 0)[0], model.Outcome(x, 1)[0]);
}

Eigen::VectorXd ScoreGammaBatch(const NuisanceModel& model, int arm,
                                const Eigen::MatrixXd& x,
                                const Eigen::VectorXd& y) {
  const Eigen::VectorXd pi = model.Propensity(x);
  const Eigen::VectorXd mu0 = model.Outcome(x, 0);
  const Eigen::VectorXd mu1 = model.Outcome(x, 1);
  Eigen::VectorXd gamma(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    gamma[i] = ScoreGamma(arm, y[i], pi[i], mu0[i], mu1[i]);
  }
  return gamma;
}

ScoreVector EstimateAte(const NuisanceModel& model, const Dataset& d) {
  const Eigen::VectorXd pi = model.Propensity(d.x());
  const Eigen::VectorXd mu0 = model.Outcome(d.x(), 0);
  const Eigen::VectorXd mu1 = model.Outcome(d.x(), 1);
  Eigen::VectorXd gamma(d.size());
  for (std::int64_t i = 0; i < d.size(); ++i) {
    gamma[i] = ScoreGamma(d.a()[i], d.y()[i], pi[i], mu0[i], mu1[i]);
  }
  return ScoreVectorFromGamma(std::move(gamma));
}

ScoreVector ScoreVectorFromGamma(Eigen::VectorXd gamma) {
  if (gamma.size() == 0) {
    throw EmptyDatasetError("cannot aggregate an empty score vector");
  }
  ScoreVector sv;
  sv.gamma = std::move(gamma);
  const auto& g = sv.gamma;
  sv.tau_hat = PairwiseMean([&](std::int64_t i) { return g[i]; }, g.size());
  const double tau = sv.tau_hat;
  sv.sigma2_hat = PairwiseMean(
      [&](std::int64_t i) {
        const double c = g[i] - tau;
        return c * c;
      },
      g.size());
  return sv;
}

double InfluenceAte(const ScoreVector& sv, std::int64_t i) {
  return sv.gamma[i] - sv.tau_hat;
}

double SandwichVariance(const ScoreVector& sv) {
  const auto& g = sv.gamma;
  const double tau = sv.tau_hat;
  return PairwiseMean(
      [&](std::int64_t i) {
        const double c = g[i] - tau;
        return c * c;
      },
      g.size());
}

double InfluenceVariance(const ScoreVector& sv, const NuisanceModel& model,
                         const Sample& z) {
  const double centered = ScoreGamma(model, z) - sv.tau_hat;
  return centered * centered - sv.sigma2_hat;
}

}  // namespace dpate
