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

#include "dpate/privatize.h"

#include <cmath>
#include <memory>
#include <utility>

#include <json.hpp>

#include "dpate/errors.h"
#include "dpate/normal.h"

namespace dpate {

double GaussianNoise(RandomEngine& engine) { return engine.Gaussian(); }

AteRelease PrivatizeAte(double tau_hat, double gamma_tau, std::int64_t n,
                        double eps1, double delta1, double noise) {
  AteRelease release;
  release.r_tau = SmoothScale(gamma_tau, n, eps1, delta1);
  release.tau_dp = tau_hat + release.r_tau * noise;
  return release;
}

AteRelease PrivatizeAte(double tau_hat, double gamma_tau, std::int64_t n,
                        double eps1, double delta1, RandomEngine& engine) {
  return PrivatizeAte(tau_hat, gamma_tau, n, eps1, delta1,
                      GaussianNoise(engine));
}

double PrivatizeVariance(double sigma2_hat, double gamma_sigma, std::int64_t n,
                         double eps2, double delta2, double noise) {
  const double r_sigma = SmoothScale(gamma_sigma, n, eps2, delta2);
  return std::max(0.0, sigma2_hat + r_sigma * noise);
}

double PrivatizeVariance(double sigma2_hat, double gamma_sigma, std::int64_t n,
                         double eps2, double delta2, RandomEngine& engine) {
  return PrivatizeVariance(sigma2_hat, gamma_sigma, n, eps2, delta2,
                           GaussianNoise(engine));
}

double AugmentedVariance(double sigma2_dp, double gamma_tau, std::int64_t n,
                         double eps1, double delta1) {
  if (!(sigma2_dp >= 0.0)) {
    throw DomainError("privatized variance must be non-negative");
  }
  if (n < 2) throw DomainError("augmented variance requires n >= 2");
  if (!(eps1 > 0.0)) throw InvalidBudgetError("epsilon share must be positive");
  if (!(delta1 > 0.0 && delta1 < 1.0)) {
    throw InvalidBudgetError("delta share must lie strictly in (0, 1)");
  }
  const double nd = static_cast<double>(n);
  return sigma2_dp + gamma_tau * gamma_tau * 50.0 * std::log(nd) *
                         std::log(2.0 / delta1) / (nd * eps1 * eps1);
}

std::pair<double, double> DpConfidenceInterval(double tau_dp, double v_dp,
                                               std::int64_t n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie strictly in (0, 1)");
  }
  if (!(v_dp >= 0.0)) throw DomainError("variance must be non-negative");
  if (n < 1) throw DomainError("interval requires n >= 1");
  const double half_width = NormalQuantile(1.0 - alpha / 2.0) *
                            std::sqrt(v_dp / static_cast<double>(n));
  return {tau_dp - half_width, tau_dp + half_width};
}

std::string ReportToJson(const DpAteReport& report) {
  nlohmann::ordered_json json;
  json["schema_version"] = 1;
  json["tau_dp"] = report.tau_dp;
  json["sigma2_dp"] = report.sigma2_dp;
  json["v_dp"] = report.v_dp;
  json["ci_lo"] = report.ci_lo;
  json["ci_hi"] = report.ci_hi;
  json["alpha"] = report.alpha;
  json["n"] = report.n;
  json["budget"] = {{"epsilon", report.epsilon},
                    {"delta", report.delta},
                    {"ate_fraction", report.ate_fraction},
                    {"eps1", report.split.eps1},
                    {"delta1", report.split.delta1},
                    {"eps2", report.split.eps2},
                    {"delta2", report.split.delta2}};
  json["scales"] = {{"r_tau", report.r_tau}, {"r_sigma", report.r_sigma}};
  json["sensitivities"] = {
      {"gamma_tau", report.gamma_tau},
      {"gamma_sigma", report.gamma_sigma},
      {"note", "internal diagnostics; not part of the private release"}};
  json["seed"] = report.seed;
  json["config_digest"] = report.config_digest;
  return json.dump(2) + "\n";
}

PipelineResult EstimatePrivateDetailed(const Dataset& d,
                                       const LearnerConfig& learner,
                                       const OptimizerConfig& optimizer,
                                       const PrivacyBudget& budget,
                                       double alpha, const RngStream& stream) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie strictly in (0, 1)");
  }
  ValidateDataset(d);
  const BudgetSplit split = SplitBudget(budget);

  // Optional sample split: fit nuisances on one part, score the other.
  std::unique_ptr<std::pair<Dataset, Dataset>> parts;
  if (learner.split_nuisance) {
    parts = std::make_unique<std::pair<Dataset, Dataset>>(SplitDataset(
        d, learner.split_fraction, stream.Child(streams::kSplit)));
  }
  const Dataset& fit_data = parts ? parts->first : d;
  const Dataset& score_data = parts ? parts->second : d;

  NuisanceModel model =
      FitNuisances(fit_data, learner, stream.Child(streams::kFit));
  ScoreVector scores = EstimateAte(model, score_data);
  SensitivityReport sensitivity =
      ComputeSensitivities(model, scores, score_data, optimizer,
                           stream.Child(streams::kSensitivity));

  const std::int64_t n = score_data.size();
  RandomEngine ate_engine(stream.Child(streams::kAteNoise));
  RandomEngine var_engine(stream.Child(streams::kVarianceNoise));
  const AteRelease ate = PrivatizeAte(scores.tau_hat, sensitivity.gamma_tau, n,
                                      split.eps1, split.delta1, ate_engine);
  const double r_sigma =
      SmoothScale(sensitivity.gamma_sigma, n, split.eps2, split.delta2);
  const double sigma2_dp =
      PrivatizeVariance(scores.sigma2_hat, sensitivity.gamma_sigma, n,
                        split.eps2, split.delta2, var_engine);
  const double v_dp =
      AugmentedVariance(sigma2_dp, sensitivity.gamma_tau, n, split.eps1,
                        split.delta1);
  const auto ci = DpConfidenceInterval(ate.tau_dp, v_dp, n, alpha);

  PipelineResult result{DpAteReport{}, std::move(scores),
                        std::move(sensitivity), std::move(model)};
  DpAteReport& report = result.report;
  report.tau_dp = ate.tau_dp;
  report.sigma2_dp = sigma2_dp;
  report.v_dp = v_dp;
  report.ci_lo = ci.first;
  report.ci_hi = ci.second;
  report.alpha = alpha;
  report.epsilon = budget.epsilon();
  report.delta = budget.delta();
  report.ate_fraction = budget.ate_fraction();
  report.split = split;
  report.r_tau = ate.r_tau;
  report.r_sigma = r_sigma;
  report.gamma_tau = result.sensitivity.gamma_tau;
  report.gamma_sigma = result.sensitivity.gamma_sigma;
  report.n = n;
  report.seed = stream.seed();
  return result;
}

DpAteReport EstimatePrivate(const Dataset& d, const LearnerConfig& learner,
                            const PrivacyBudget& budget, double alpha,
                            const RngStream& stream,
                            const OptimizerConfig& optimizer) {
  return EstimatePrivateDetailed(d, learner, optimizer, budget, alpha, stream)
      .report;
}

}  // namespace dpate
