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

#ifndef DPATE_SYNTHETIC_DATA_H_
#define DPATE_SYNTHETIC_DATA_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "dpate/dataset.h"
#include "dpate/random.h"

namespace dpate {

// Parameters of the synthetic observational design.  Covariates are uniform
// on [0,1]^p; treatment is Bernoulli with propensity clip((x'beta + 1)/2)
// to [clip_lo, clip_hi]; the outcome is tau_true * a + x'gamma + noise with
// noise uniform on [-1, 1].  beta and gamma share a random support of size
// s with beta_j ~ U[0, 0.3] and gamma_j ~ U[0, 1] on the support.
struct GeneratorSpec {
  int p = 2;
  int s = 2;
  double tau_true = 1.0;
  double clip_lo = 0.1;
  double clip_hi = 0.9;
  // Base seed recorded with the generated data; the draw itself uses the
  // stream passed to GenDataset.
  std::uint64_t seed = 0;
};

// Low-dimensional design: two covariates, both active.
GeneratorSpec Dataset1Spec();

// High-dimensional design: 24 covariates of which 6 act as confounders.
GeneratorSpec Dataset2Spec();

// Ground truth of a generated dataset, for evaluation and for export as a
// sidecar record next to a CSV file.
struct TruthRecord {
  double tau_true = 0.0;
  Eigen::VectorXd beta;
  Eigen::VectorXd gamma;
  DomainBounds bounds;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct GeneratedData {
  Dataset dataset;
  TruthRecord truth;
};

// Draws n samples from the design.  The outcome bounds are the analytic
// range of the drawn coefficients, so every sample validates against them.
// Deterministic given (spec, n, stream).
GeneratedData GenDataset(const GeneratorSpec& spec, std::int64_t n,
                         const RngStream& stream);

// A randomized-controlled-trial design: one covariate, a fair-coin
// treatment and the same outcome model with tau_true = 1.
GeneratedData GenRct(std::int64_t n, const RngStream& stream);

// Writes the truth record as JSON next to an exported CSV.
void WriteTruthJson(const std::string& path, const TruthRecord& truth);

}  // namespace dpate

#endif  // DPATE_SYNTHETIC_DATA_H_
