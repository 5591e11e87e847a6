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

#ifndef DPATE_NUISANCE_H_
#define DPATE_NUISANCE_H_

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "dpate/dataset.h"
#include "dpate/random.h"

namespace dpate {

// Propensity clipping keeps inverse-propensity weights bounded; c must lie
// in (0, 0.5).
inline constexpr double kDefaultPropensityClip = 0.05;

struct KernelConfig {
  // Ridge strength added to the kernel matrix diagonal.
  double ridge = 0.1;
  // RBF bandwidth parameter; 0 means "set to 1/dim at fit time".
  double bandwidth = 0.0;
};

struct MlpConfig {
  int hidden = 32;
  double l2 = 0.1;
  double learning_rate = 0.01;
  int epochs = 200;
  int batch = 32;
};

enum class LearnerFamily { kKernel, kMlp };

// Everything needed to fit the two nuisance functions.
struct LearnerConfig {
  LearnerFamily family = LearnerFamily::kKernel;
  KernelConfig kernel;
  MlpConfig mlp;
  double propensity_clip = kDefaultPropensityClip;
  // When true, nuisances are fit on one shuffled part of the data and scores
  // are evaluated on the other.
  bool split_nuisance = false;
  double split_fraction = 0.5;
};

// A fitted propensity function x -> P(A = 1 | X = x), before clipping.
class PropensityModel {
 public:
  virtual ~PropensityModel() = default;
  virtual Eigen::VectorXd Raw(const Eigen::MatrixXd& x) const = 0;
};

// A fitted pair of outcome regressions x -> E[Y | X = x, A = arm], before
// clamping to the outcome bounds.
class OutcomeModel {
 public:
  virtual ~OutcomeModel() = default;
  virtual Eigen::VectorXd Raw(const Eigen::MatrixXd& x, int arm) const = 0;
};

// The fitted nuisance pair with the evaluation-time safeguards applied:
// propensities are clipped to [clip, 1 - clip] and outcome predictions are
// clamped to the declared outcome bounds.  Instances are immutable after
// construction and safe to evaluate concurrently.
class NuisanceModel {
 public:
  NuisanceModel(std::shared_ptr<const PropensityModel> propensity,
                std::shared_ptr<const OutcomeModel> outcome, double clip,
                DomainBounds bounds, std::string description);

  // Batch evaluation; one row per point.
  Eigen::VectorXd Propensity(const Eigen::MatrixXd& x) const;
  Eigen::VectorXd Outcome(const Eigen::MatrixXd& x, int arm) const;

  // Single-point convenience wrappers.
  double Propensity(const Eigen::VectorXd& x) const;
  double Outcome(const Eigen::VectorXd& x, int arm) const;

  double clip() const { return clip_; }
  const DomainBounds& bounds() const { return bounds_; }
  const std::string& description() const { return description_; }

 private:
  std::shared_ptr<const PropensityModel> propensity_;
  std::shared_ptr<const OutcomeModel> outcome_;
  double clip_;
  DomainBounds bounds_;
  std::string description_;
};

// Logistic regression fit by full-batch gradient ascent with line search and
// a small ridge penalty on the non-intercept coefficients.  Stops when the
// gradient max-norm falls below 1e-6 or after 5000 iterations.  Throws
// SingleArmError when every sample carries the same treatment.
class LogisticModel : public PropensityModel {
 public:
  LogisticModel(Eigen::VectorXd coefficients, double intercept,
                int iterations);
  Eigen::VectorXd Raw(const Eigen::MatrixXd& x) const override;

  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  double intercept() const { return intercept_; }
  int iterations() const { return iterations_; }

 private:
  Eigen::VectorXd coefficients_;
  double intercept_;
  int iterations_;
};

std::shared_ptr<const LogisticModel> FitLogistic(const Dataset& d);

// Per-arm RBF kernel ridge regression: coefficients solve
// (K + ridge * I) c = y on the arm's samples.  Throws SingleArmError when an
// arm has no samples and LinearSolveError when the factorization fails.
class KernelRidgeModel : public OutcomeModel {
 public:
  KernelRidgeModel(Eigen::MatrixXd train_x[2], Eigen::VectorXd coef[2],
                   double bandwidth);
  Eigen::VectorXd Raw(const Eigen::MatrixXd& x, int arm) const override;

  double bandwidth() const { return bandwidth_; }
  // Max-norm of (K + ridge I) c - y on the training data of one arm,
  // recomputed with the stored coefficients.
  double ResidualMaxNorm(const Dataset& d, double ridge, int arm) const;

 private:
  Eigen::MatrixXd train_x_[2];
  Eigen::VectorXd coef_[2];
  double bandwidth_;
};

std::shared_ptr<const KernelRidgeModel> FitKernelRidge(
    const Dataset& d, const KernelConfig& config);

// One-hidden-layer perceptrons (tanh activations) trained by mini-batch SGD.
// The propensity network ends in a sigmoid; outcome networks are linear and
// fit separately per arm.  Training is deterministic given the stream.
// Throws NonFiniteLossError if the loss diverges.
class MlpPropensityModel;
class MlpOutcomeModel;

std::shared_ptr<const MlpPropensityModel> FitMlpPropensity(
    const Dataset& d, const MlpConfig& config, const RngStream& stream);
std::shared_ptr<const MlpOutcomeModel> FitMlpOutcome(const Dataset& d,
                                                     const MlpConfig& config,
                                                     const RngStream& stream);

// Fits both nuisance functions according to the learner family and wraps
// them with the clipping and clamping safeguards.
NuisanceModel FitNuisances(const Dataset& d, const LearnerConfig& config,
                           const RngStream& stream);

}  // namespace dpate

#endif  // DPATE_NUISANCE_H_
