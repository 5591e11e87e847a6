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

#ifndef DPATE_RUN_CONFIG_H_
#define DPATE_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dpate/dataset.h"
#include "dpate/evaluation.h"
#include "dpate/nuisance.h"
#include "dpate/privacy-budget.h"
#include "dpate/sensitivity.h"

namespace dpate {

// The complete run configuration: defaults, overlaid by an INI-style config
// file, overlaid by command-line flags.  Unknown sections or keys are
// rejected rather than ignored.
struct RunConfig {
  // [run]
  std::uint64_t seed = 1;
  int runs = 200;
  std::vector<double> alphas{0.2, 0.1, 0.05};
  int threads = 1;
  std::string out;

  // [data]
  std::string source = "dataset1";  // dataset1 | dataset2 | rct | csv
  std::int64_t n = 1000;
  std::string csv_path;
  std::vector<std::string> covariates;
  std::string treatment_column = "a";
  std::string outcome_column = "y";
  bool have_x_bounds = false;
  bool have_y_bounds = false;
  std::vector<double> x_lo;
  std::vector<double> x_hi;
  double y_lo = 0.0;
  double y_hi = 0.0;

  // [learner]
  LearnerConfig learner;

  // [budget]
  double epsilon = 0.5;
  double delta = 1e-5;
  double ate_fraction = 0.9;

  // [optimizer]
  OptimizerConfig optimizer;

  // [sweep]  (sweeps and utility curves report at a single level)
  std::string sweep_axis = "epsilon";
  std::vector<double> sweep_grid{0.1, 0.25, 0.5, 1.0, 2.0};
  std::vector<std::string> sweep_methods{"standard", "private"};
  double sweep_alpha = 0.05;

  // [utility]
  std::vector<double> utility_weights{0.0, 0.5, 1.0};

  // [bootstrap]
  int bootstrap_replicates = 100;
};

// Reads an INI-style file ("[section]" headers, "key = value" lines, '#'
// comments).  Throws ConfigError on unknown sections/keys or bad values.
RunConfig ParseConfigFile(const std::string& path);

// Applies one key in one section; shared by the file parser and by flag
// handling so both spell values identically.
void ApplyConfigValue(RunConfig& config, const std::string& section,
                      const std::string& key, const std::string& value);

// Canonical text form of a resolved configuration: every key in a fixed
// order with shortest-round-trip numbers.  Two configurations resolve to
// the same behaviour iff their canonical texts match.
std::string CanonicalConfigText(const RunConfig& config);

// FNV-1a 64-bit digest of the canonical text, as 16 hex characters.
std::string ConfigDigest(const RunConfig& config);

// Typed views of the configuration.
PrivacyBudget MakeBudget(const RunConfig& config);
DataSource MakeDataSource(const RunConfig& config);  // Synthetic sources only.
CsvSchema MakeCsvSchema(const RunConfig& config);
DomainBounds MakeBounds(const RunConfig& config);
Method MethodFromName(const std::string& name);

}  // namespace dpate

#endif  // DPATE_RUN_CONFIG_H_
