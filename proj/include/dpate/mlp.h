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

#ifndef DPATE_MLP_H_
#define DPATE_MLP_H_

#include <Eigen/Dense>

#include "dpate/nuisance.h"

namespace dpate {

// A one-hidden-layer network with tanh activations and a linear output.
struct MlpNetwork {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;  // hidden
  Eigen::VectorXd w2;  // hidden
  double b2 = 0.0;

  // Linear output for each row of x.
  Eigen::VectorXd Forward(const Eigen::MatrixXd& x) const;
};

class MlpPropensityModel : public PropensityModel {
 public:
  explicit MlpPropensityModel(MlpNetwork network);
  // Sigmoid of the network output.
  Eigen::VectorXd Raw(const Eigen::MatrixXd& x) const override;

 private:
  MlpNetwork network_;
};

class MlpOutcomeModel : public OutcomeModel {
 public:
  MlpOutcomeModel(MlpNetwork arm0, MlpNetwork arm1);
  Eigen::VectorXd Raw(const Eigen::MatrixXd& x, int arm) const override;

 private:
  MlpNetwork networks_[2];
};

}  // namespace dpate

#endif  // DPATE_MLP_H_
