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

#include "dpate/synthetic-data.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "dpate/errors.h"

namespace dpate {
namespace {

void CheckSpec(const GeneratorSpec& spec) {
  if (spec.p < 1) throw ConfigError("generator dimension must be >= 1");
  if (spec.s < 1 || spec.s > spec.p) {
    throw ConfigError("support size must lie in [1, p]");
  }
  if (!(spec.clip_lo > 0.0 && spec.clip_lo <= spec.clip_hi &&
        spec.clip_hi < 1.0)) {
    throw ConfigError("propensity clip range must satisfy 0 < lo <= hi < 1");
  }
}

// Shared sampler; an RCT uses a constant fair-coin propensity instead of
// the covariate-driven one.
GeneratedData Generate(const GeneratorSpec& spec, std::int64_t n,
                       const RngStream& stream, bool rct) {
  CheckSpec(spec);
  if (n < 2) throw ConfigError("generator requires n >= 2");
  RandomEngine engine(stream);

  // Support indices are drawn without replacement, then coefficients are
  // assigned in increasing index order.  The draw order here is part of the
  // reproducibility contract.
  std::vector<int> indices(spec.p);
  std::iota(indices.begin(), indices.end(), 0);
  for (int k = 0; k < spec.s; ++k) {
    const int j =
        k + static_cast<int>(engine.Bounded(static_cast<std::uint64_t>(
                spec.p - k)));
    std::swap(indices[k], indices[j]);
  }
  std::vector<int> support(indices.begin(), indices.begin() + spec.s);
  std::sort(support.begin(), support.end());

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(spec.p);
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(spec.p);
  if (!rct) {
    for (const int j : support) beta[j] = engine.UniformIn(0.0, 0.3);
  }
  for (const int j : support) gamma[j] = engine.UniformIn(0.0, 1.0);

  DomainBounds bounds;
  bounds.x_lo = Eigen::VectorXd::Zero(spec.p);
  bounds.x_hi = Eigen::VectorXd::Ones(spec.p);
  // Analytic outcome range of the drawn coefficients: x'gamma lies in
  // [0, sum gamma], the treatment adds [min(0, tau), max(0, tau)] and the
  // noise adds [-1, 1].
  bounds.y_lo = std::min(0.0, spec.tau_true) - 1.0;
  bounds.y_hi = std::max(0.0, spec.tau_true) + gamma.sum() + 1.0;

  Eigen::MatrixXd x(n, spec.p);
  Eigen::VectorXi a(n);
  Eigen::VectorXd y(n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int j = 0; j < spec.p; ++j) x(i, j) = engine.UniformIn(0.0, 1.0);
    const double propensity =
        rct ? 0.5
            : std::clamp((x.row(i).dot(beta) + 1.0) / 2.0, spec.clip_lo,
                         spec.clip_hi);
    a[i] = engine.Uniform() < propensity ? 1 : 0;
    const double noise = engine.UniformIn(-1.0, 1.0);
    y[i] = spec.tau_true * a[i] + x.row(i).dot(gamma) + noise;
  }

  TruthRecord truth;
  truth.tau_true = spec.tau_true;
  truth.beta = std::move(beta);
  truth.gamma = std::move(gamma);
  truth.bounds = bounds;
  truth.seed = stream.seed();
  truth.stream = stream.stream();
  return GeneratedData{
      Dataset(std::move(x), std::move(a), std::move(y), std::move(bounds)),
      std::move(truth)};
}

}  // namespace

GeneratorSpec Dataset1Spec() {
  GeneratorSpec spec;
  spec.p = 2;
  spec.s = 2;
  return spec;
}

GeneratorSpec Dataset2Spec() {
  GeneratorSpec spec;
  spec.p = 24;
  spec.s = 6;
  return spec;
}

GeneratedData GenDataset(const GeneratorSpec& spec, std::int64_t n,
                         const RngStream& stream) {
  return Generate(spec, n, stream, /*rct=*/false);
}

GeneratedData GenRct(std::int64_t n, const RngStream& stream) {
  GeneratorSpec spec;
  spec.p = 1;
  spec.s = 1;
  return Generate(spec, n, stream, /*rct=*/true);
}

void WriteTruthJson(const std::string& path, const TruthRecord& truth) {
  nlohmann::ordered_json json;
  json["tau_true"] = truth.tau_true;
  json["beta"] = std::vector<double>(truth.beta.data(),
                                     truth.beta.data() + truth.beta.size());
  json["gamma"] = std::vector<double>(truth.gamma.data(),
                                      truth.gamma.data() + truth.gamma.size());
  json["bounds"] = {
      {"x_lo", std::vector<double>(truth.bounds.x_lo.data(),
                                   truth.bounds.x_lo.data() +
                                       truth.bounds.x_lo.size())},
      {"x_hi", std::vector<double>(truth.bounds.x_hi.data(),
                                   truth.bounds.x_hi.data() +
                                       truth.bounds.x_hi.size())},
      {"y_lo", truth.bounds.y_lo},
      {"y_hi", truth.bounds.y_hi}};
  json["seed"] = truth.seed;
  json["stream"] = truth.stream;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open truth file for writing: " + path);
  out << json.dump(2) << '\n';
  if (!out) throw DataError("failed writing truth file: " + path);
}

}  // namespace dpate
