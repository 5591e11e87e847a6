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

#include "dpate/mlp.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "dpate/errors.h"

namespace dpate {
namespace {

double Sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double Softplus(double t) {
  return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t)));
}

// Mini-batch SGD on squared loss (linear head) or log loss (sigmoid head).
// The L2 penalty covers weights only, scaled by 1/n so its pull per step
// does not grow with the number of batches.
MlpNetwork TrainNetwork(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                        bool logistic_head, const MlpConfig& config,
                        RandomEngine& engine) {
  const std::int64_t n = x.rows();
  const int p = static_cast<int>(x.cols());
  const int h = config.hidden;

  MlpNetwork net;
  const double s1 = std::sqrt(6.0 / static_cast<double>(p + h));
  const double s2 = std::sqrt(6.0 / static_cast<double>(h + 1));
  net.w1.resize(h, p);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < p; ++j) net.w1(i, j) = engine.UniformIn(-s1, s1);
  }
  net.b1 = Eigen::VectorXd::Zero(h);
  net.w2.resize(h);
  for (int i = 0; i < h; ++i) net.w2[i] = engine.UniformIn(-s2, s2);
  net.b2 = 0.0;

  const double decay = config.l2 / static_cast<double>(n);
  std::vector<std::int64_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    engine.Shuffle(order);
    double epoch_loss = 0.0;
    for (std::int64_t begin = 0; begin < n; begin += config.batch) {
      const std::int64_t m = std::min<std::int64_t>(config.batch, n - begin);
      Eigen::MatrixXd xb(m, p);
      Eigen::VectorXd tb(m);
      for (std::int64_t i = 0; i < m; ++i) {
        xb.row(i) = x.row(order[begin + i]);
        tb[i] = t[order[begin + i]];
      }

      const Eigen::MatrixXd z =
          ((xb * net.w1.transpose()).rowwise() + net.b1.transpose());
      const Eigen::MatrixXd hidden = z.array().tanh();
      const Eigen::VectorXd f = (hidden * net.w2).array() + net.b2;

      Eigen::VectorXd df(m);
      if (logistic_head) {
        for (std::int64_t i = 0; i < m; ++i) {
          df[i] = Sigmoid(f[i]) - tb[i];
          epoch_loss += Softplus(f[i]) - tb[i] * f[i];
        }
      } else {
        df = f - tb;
        epoch_loss += 0.5 * df.squaredNorm();
      }

      const double scale = 1.0 / static_cast<double>(m);
      const Eigen::VectorXd g_w2 =
          scale * (hidden.transpose() * df) + decay * net.w2;
      const double g_b2 = scale * df.sum();
      const Eigen::MatrixXd dz =
          (df * net.w2.transpose()).array() * (1.0 - hidden.array().square());
      const Eigen::MatrixXd g_w1 =
          scale * (dz.transpose() * xb) + decay * net.w1;
      const Eigen::VectorXd g_b1 = scale * dz.colwise().sum().transpose();

      net.w1 -= config.learning_rate * g_w1;
      net.b1 -= config.learning_rate * g_b1;
      net.w2 -= config.learning_rate * g_w2;
      net.b2 -= config.learning_rate * g_b2;
    }
    if (!std::isfinite(epoch_loss)) {
      throw NonFiniteLossError("mlp training loss diverged in epoch " +
                               std::to_string(epoch));
    }
  }
  return net;
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

Eigen::VectorXd MlpNetwork::Forward(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd hidden =
      ((x * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
  return (hidden * w2).array() + b2;
}

MlpPropensityModel::MlpPropensityModel(MlpNetwork network)
    : network_(std::move(network)) {}

Eigen::VectorXd MlpPropensityModel::Raw(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd f = network_.Forward(x);
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = Sigmoid(f[i]);
  return f;
}

MlpOutcomeModel::MlpOutcomeModel(MlpNetwork arm0, MlpNetwork arm1)
    : networks_{std::move(arm0), std::move(arm1)} {}

Eigen::VectorXd MlpOutcomeModel::Raw(const Eigen::MatrixXd& x, int arm) const {
  return networks_[arm].Forward(x);
}

std::shared_ptr<const MlpPropensityModel> FitMlpPropensity(
    const Dataset& d, const MlpConfig& config, const RngStream& stream) {
  if (d.ArmCount(1) == 0 || d.ArmCount(0) == 0) {
    throw SingleArmError("propensity fit requires samples from both arms");
  }
  Eigen::VectorXd targets(d.size());
  for (std::int64_t i = 0; i < d.size(); ++i) targets[i] = d.a()[i];
  RandomEngine engine(stream);
  return std::make_shared<const MlpPropensityModel>(
      TrainNetwork(d.x(), targets, /*logistic_head=*/true, config, engine));
}

std::shared_ptr<const MlpOutcomeModel> FitMlpOutcome(const Dataset& d,
                                                     const MlpConfig& config,
                                                     const RngStream& stream) {
  MlpNetwork nets[2];
  for (int arm = 0; arm < 2; ++arm) {
    if (d.ArmCount(arm) == 0) {
      throw SingleArmError("outcome fit requires samples in arm " +
                           std::to_string(arm));
    }
    RandomEngine engine(stream.Child(arm));
    nets[arm] = TrainNetwork(ArmRows(d, arm), ArmOutcomes(d, arm),
                             /*logistic_head=*/false, config, engine);
  }
  return std::make_shared<const MlpOutcomeModel>(std::move(nets[0]),
                                                 std::move(nets[1]));
}

}  // namespace dpate
