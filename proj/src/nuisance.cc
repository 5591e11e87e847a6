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

#include "dpate/nuisance.h"

#include <cmath>
#include <sstream>
#include <utility>

#include "dpate/errors.h"
#include "dpate/mlp.h"

namespace dpate {
namespace {

// Ridge penalty on the non-intercept logistic coefficients; breaks exact
// collinearity without noticeably biasing the fit.
constexpr double kLogisticRidge = 1e-4;
constexpr double kLogisticTolerance = 1e-6;
constexpr int kLogisticMaxIterations = 5000;

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow.
double Softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

void CheckLearnerConfig(const LearnerConfig& config) {
  if (!(config.propensity_clip > 0.0 && config.propensity_clip < 0.5)) {
    throw ConfigError("propensity clip must lie strictly in (0, 0.5)");
  }
  if (!(config.kernel.ridge > 0.0)) {
    throw ConfigError("kernel ridge strength must be positive");
  }
  if (config.kernel.bandwidth < 0.0) {
    throw ConfigError("kernel bandwidth must be non-negative");
  }
  if (config.mlp.hidden < 1) throw ConfigError("mlp hidden width must be >= 1");
  if (config.mlp.batch < 1) throw ConfigError("mlp batch size must be >= 1");
  if (config.mlp.epochs < 1) throw ConfigError("mlp epochs must be >= 1");
  if (!(config.mlp.learning_rate > 0.0)) {
    throw ConfigError("mlp learning rate must be positive");
  }
  if (config.mlp.l2 < 0.0) throw ConfigError("mlp l2 must be non-negative");
  if (config.split_nuisance &&
      !(config.split_fraction > 0.0 && config.split_fraction < 1.0)) {
    throw ConfigError("split fraction must lie strictly in (0, 1)");
  }
}

}  // namespace

NuisanceModel::NuisanceModel(std::shared_ptr<const PropensityModel> propensity,
                             std::shared_ptr<const OutcomeModel> outcome,
                             double clip, DomainBounds bounds,
                             std::string description)
    : propensity_(std::move(propensity)),
      outcome_(std::move(outcome)),
      clip_(clip),
      bounds_(std::move(bounds)),
      description_(std::move(description)) {
  if (!(clip_ > 0.0 && clip_ < 0.5)) {
    throw ConfigError("propensity clip must lie strictly in (0, 0.5)");
  }
}

Eigen::VectorXd NuisanceModel::Propensity(const Eigen::MatrixXd& x) const {
  return propensity_->Raw(x).cwiseMax(clip_).cwiseMin(1.0 - clip_);
}

Eigen::VectorXd NuisanceModel::Outcome(const Eigen::MatrixXd& x,
                                       int arm) const {
  return outcome_->Raw(x, arm).cwiseMax(bounds_.y_lo).cwiseMin(bounds_.y_hi);
}

double NuisanceModel::Propensity(const Eigen::VectorXd& x) const {
  return Propensity(Eigen::MatrixXd(x.transpose()))[0];
}

double NuisanceModel::Outcome(const Eigen::VectorXd& x, int arm) const {
  return Outcome(Eigen::MatrixXd(x.transpose()), arm)[0];
}

LogisticModel::LogisticModel(Eigen::VectorXd coefficients, double intercept,
                             int iterations)
    : coefficients_(std::move(coefficients)),
      intercept_(intercept),
      iterations_(iterations) {}

Eigen::VectorXd LogisticModel::Raw(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd t = (x * coefficients_).array() + intercept_;
  for (Eigen::Index i = 0; i < t.size(); ++i) t[i] = Sigmoid(t[i]);
  return t;
}

std::shared_ptr<const LogisticModel> FitLogistic(const Dataset& d) {
  const std::int64_t n = d.size();
  if (d.ArmCount(1) == 0 || d.ArmCount(0) == 0) {
    throw SingleArmError("logistic fit requires samples from both arms");
  }
  const Eigen::MatrixXd& x = d.x();
  Eigen::VectorXd a(n);
  for (std::int64_t i = 0; i < n; ++i) a[i] = d.a()[i];

  // Penalized mean log-likelihood; the intercept is not penalized.
  const auto objective = [&](const Eigen::VectorXd& beta, double b) {
    const Eigen::VectorXd t = (x * beta).array() + b;
    double sum = 0.0;
    for (std::int64_t i = 0; i < n; ++i) sum += a[i] * t[i] - Softplus(t[i]);
    return sum / static_cast<double>(n) -
           0.5 * kLogisticRidge * beta.squaredNorm();
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.dim());
  double b = 0.0;
  double value = objective(beta, b);
  double step = 1.0;
  int iterations = 0;

  for (; iterations < kLogisticMaxIterations; ++iterations) {
    Eigen::VectorXd t = (x * beta).array() + b;
    Eigen::VectorXd p(n);
    for (std::int64_t i = 0; i < n; ++i) p[i] = Sigmoid(t[i]);
    const Eigen::VectorXd residual = a - p;
    const Eigen::VectorXd g_beta =
        x.transpose() * residual / static_cast<double>(n) -
        kLogisticRidge * beta;
    const double g_b = residual.mean();
    const double g_norm = std::max(g_beta.lpNorm<Eigen::Infinity>(),
                                   std::abs(g_b));
    if (g_norm < kLogisticTolerance) break;

    // Backtracking line search on the ascent direction, warm-started from
    // twice the last accepted step.
    const double g_sq = g_beta.squaredNorm() + g_b * g_b;
    double s = 2.0 * step;
    bool accepted = false;
    while (s > 1e-16) {
      const Eigen::VectorXd nb = beta + s * g_beta;
      const double nbb = b + s * g_b;
      const double nv = objective(nb, nbb);
      if (nv >= value + 1e-4 * s * g_sq) {
        beta = nb;
        b = nbb;
        value = nv;
        step = s;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) break;  // Numerically stationary.
  }
  return std::make_shared<const LogisticModel>(std::move(beta), b, iterations);
}

namespace {

// Squared Euclidean distances between the rows of two matrices.
Eigen::MatrixXd SquaredDistances(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b) {
  Eigen::MatrixXd d = -2.0 * (a * b.transpose());
  d.colwise() += a.rowwise().squaredNorm();
  d.rowwise() += b.rowwise().squaredNorm().transpose();
  return d.cwiseMax(0.0);
}

Eigen::MatrixXd RbfKernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          double bandwidth) {
  return (-bandwidth * SquaredDistances(a, b)).array().exp();
}

Eigen::MatrixXd ArmRows(const Dataset& d, int arm) {
  Eigen::MatrixXd x(d.ArmCount(arm), d.dim());
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < d.size(); ++i) {
    if (d.a()[i] == arm) x.row(k++) = d.x().row(i);
  }
  return x;
}

Eigen::VectorXd ArmOutcomes(const Dataset& d, int arm) {
  Eigen::VectorXd y(d.ArmCount(arm));
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < d.size(); ++i) {
    if (d.a()[i] == arm) y[k++] = d.y()[i];
  }
  return y;
}

}  // namespace

KernelRidgeModel::KernelRidgeModel(Eigen::MatrixXd train_x[2],
                                   Eigen::VectorXd coef[2], double bandwidth)
    : bandwidth_(bandwidth) {
  for (int arm = 0; arm < 2; ++arm) {
    train_x_[arm] = std::move(train_x[arm]);
    coef_[arm] = std::move(coef[arm]);
  }
}

Eigen::VectorXd KernelRidgeModel::Raw(const Eigen::MatrixXd& x,
                                      int arm) const {
  return RbfKernel(x, train_x_[arm], bandwidth_) * coef_[arm];
}

double KernelRidgeModel::ResidualMaxNorm(const Dataset& d, double ridge,
                                         int arm) const {
  const Eigen::MatrixXd k = RbfKernel(train_x_[arm], train_x_[arm], bandwidth_);
  const Eigen::VectorXd y = ArmOutcomes(d, arm);
  const Eigen::VectorXd residual =
      k * coef_[arm] + ridge * coef_[arm] - y;
  return residual.lpNorm<Eigen::Infinity>();
}

std::shared_ptr<const KernelRidgeModel> FitKernelRidge(
    const Dataset& d, const KernelConfig& config) {
  if (!(config.ridge > 0.0)) {
    throw ConfigError("kernel ridge strength must be positive");
  }
  const double bandwidth = config.bandwidth > 0.0
                               ? config.bandwidth
                               : 1.0 / static_cast<double>(d.dim());
  Eigen::MatrixXd train_x[2];
  Eigen::VectorXd coef[2];
  for (int arm = 0; arm < 2; ++arm) {
    if (d.ArmCount(arm) == 0) {
      throw SingleArmError("kernel ridge fit requires samples in arm " +
                           std::to_string(arm));
    }
    train_x[arm] = ArmRows(d, arm);
    Eigen::MatrixXd k = RbfKernel(train_x[arm], train_x[arm], bandwidth);
    k.diagonal().array() += config.ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) {
      throw LinearSolveError("kernel system factorization failed in arm " +
                             std::to_string(arm));
    }
    coef[arm] = llt.solve(ArmOutcomes(d, arm));
  }
  return std::make_shared<const KernelRidgeModel>(train_x, coef, bandwidth);
}

NuisanceModel FitNuisances(const Dataset& d, const LearnerConfig& config,
                           const RngStream& stream) {
  CheckLearnerConfig(config);
  std::shared_ptr<const PropensityModel> propensity;
  std::shared_ptr<const OutcomeModel> outcome;
  std::ostringstream description;
  if (config.family == LearnerFamily::kKernel) {
    propensity = FitLogistic(d);
    const auto kernel = FitKernelRidge(d, config.kernel);
    description << "logistic + rbf kernel ridge (ridge=" << config.kernel.ridge
                << ", bandwidth=" << kernel->bandwidth() << ")";
    outcome = kernel;
  } else {
    propensity = FitMlpPropensity(d, config.mlp, stream.Child(1));
    outcome = FitMlpOutcome(d, config.mlp, stream.Child(2));
    description << "mlp (hidden=" << config.mlp.hidden
                << ", l2=" << config.mlp.l2 << ")";
  }
  description << ", clip=" << config.propensity_clip;
  return NuisanceModel(std::move(propensity), std::move(outcome),
                       config.propensity_clip, d.bounds(), description.str());
}

}  // namespace dpate
