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

#include "dpate/run-config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dpate/errors.h"
#include "dpate/numeric.h"

namespace dpate {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ParseDouble(const std::string& key, const std::string& value) {
  double parsed = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, parsed);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as a number");
  }
  return parsed;
}

std::int64_t ParseInt(const std::string& key, const std::string& value) {
  std::int64_t parsed = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, parsed);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as an integer");
  }
  return parsed;
}

std::uint64_t ParseUint(const std::string& key, const std::string& value) {
  std::uint64_t parsed = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, parsed);
  if (result.ec != std::errc{} || result.ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + value +
                      "' as an unsigned integer");
  }
  return parsed;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" +
                    value + "'");
}

std::vector<std::string> ParseNameList(const std::string& value) {
  std::vector<std::string> names;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const std::string trimmed = Trim(item);
    if (!trimmed.empty()) names.push_back(trimmed);
  }
  return names;
}

std::vector<double> ParseDoubleList(const std::string& key,
                                    const std::string& value) {
  std::vector<double> values;
  for (const std::string& item : ParseNameList(value)) {
    values.push_back(ParseDouble(key, item));
  }
  return values;
}

}  // namespace

void ApplyConfigValue(RunConfig& config, const std::string& section,
                      const std::string& key, const std::string& value) {
  const std::string qualified = section + "." + key;
  if (section == "run") {
    if (key == "seed") config.seed = ParseUint(qualified, value);
    else if (key == "runs") config.runs = static_cast<int>(ParseInt(qualified, value));
    else if (key == "alphas") config.alphas = ParseDoubleList(qualified, value);
    else if (key == "threads") config.threads = static_cast<int>(ParseInt(qualified, value));
    else if (key == "out") config.out = value;
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "data") {
    if (key == "source") config.source = value;
    else if (key == "n") config.n = ParseInt(qualified, value);
    else if (key == "csv_path") config.csv_path = value;
    else if (key == "covariates") config.covariates = ParseNameList(value);
    else if (key == "treatment") config.treatment_column = value;
    else if (key == "outcome") config.outcome_column = value;
    else if (key == "x_lo") { config.x_lo = ParseDoubleList(qualified, value); config.have_x_bounds = true; }
    else if (key == "x_hi") { config.x_hi = ParseDoubleList(qualified, value); config.have_x_bounds = true; }
    else if (key == "y_lo") { config.y_lo = ParseDouble(qualified, value); config.have_y_bounds = true; }
    else if (key == "y_hi") { config.y_hi = ParseDouble(qualified, value); config.have_y_bounds = true; }
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "learner") {
    if (key == "family") {
      if (value == "kernel") config.learner.family = LearnerFamily::kKernel;
      else if (value == "nn") config.learner.family = LearnerFamily::kMlp;
      else throw ConfigError("learner family must be 'kernel' or 'nn'");
    }
    else if (key == "clip") config.learner.propensity_clip = ParseDouble(qualified, value);
    else if (key == "ridge") config.learner.kernel.ridge = ParseDouble(qualified, value);
    else if (key == "bandwidth") config.learner.kernel.bandwidth = ParseDouble(qualified, value);
    else if (key == "hidden") config.learner.mlp.hidden = static_cast<int>(ParseInt(qualified, value));
    else if (key == "l2") config.learner.mlp.l2 = ParseDouble(qualified, value);
    else if (key == "learning_rate") config.learner.mlp.learning_rate = ParseDouble(qualified, value);
    else if (key == "epochs") config.learner.mlp.epochs = static_cast<int>(ParseInt(qualified, value));
    else if (key == "batch") config.learner.mlp.batch = static_cast<int>(ParseInt(qualified, value));
    else if (key == "split") config.learner.split_nuisance = ParseBool(qualified, value);
    else if (key == "split_fraction") config.learner.split_fraction = ParseDouble(qualified, value);
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "budget") {
    if (key == "epsilon") config.epsilon = ParseDouble(qualified, value);
    else if (key == "delta") config.delta = ParseDouble(qualified, value);
    else if (key == "ate_fraction") config.ate_fraction = ParseDouble(qualified, value);
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "optimizer") {
    if (key == "starts") config.optimizer.starts = static_cast<int>(ParseInt(qualified, value));
    else if (key == "max_iterations") config.optimizer.max_iterations = static_cast<int>(ParseInt(qualified, value));
    else if (key == "fd_step_scale") config.optimizer.fd_step_scale = ParseDouble(qualified, value);
    else if (key == "tolerance") config.optimizer.tolerance = ParseDouble(qualified, value);
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "sweep") {
    if (key == "axis") config.sweep_axis = value;
    else if (key == "grid") config.sweep_grid = ParseDoubleList(qualified, value);
    else if (key == "methods") config.sweep_methods = ParseNameList(value);
    else if (key == "alpha") config.sweep_alpha = ParseDouble(qualified, value);
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "utility") {
    if (key == "weights") config.utility_weights = ParseDoubleList(qualified, value);
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  if (section == "bootstrap") {
    if (key == "replicates") config.bootstrap_replicates = static_cast<int>(ParseInt(qualified, value));
    else throw ConfigError("unknown config key '" + qualified + "'");
    return;
  }
  throw ConfigError("unknown config section '" + section + "'");
}

RunConfig ParseConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);

  RunConfig config;
  std::string section;
  std::string line;
  std::int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_number) +
                          ": malformed section header");
      }
      section = Trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto equals = line.find('=');
    if (equals == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": key outside any [section]");
    }
    ApplyConfigValue(config, section, Trim(line.substr(0, equals)),
                     Trim(line.substr(equals + 1)));
  }
  return config;
}

namespace {

void AppendList(std::ostringstream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    os << FormatShortest(values[i]);
  }
}

void AppendList(std::ostringstream& os, const std::vector<std::string>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    os << values[i];
  }
}

}  // namespace

std::string CanonicalConfigText(const RunConfig& c) {
  std::ostringstream os;
  os << "bootstrap.replicates=" << c.bootstrap_replicates << '\n';
  os << "budget.ate_fraction=" << FormatShortest(c.ate_fraction) << '\n';
  os << "budget.delta=" << FormatShortest(c.delta) << '\n';
  os << "budget.epsilon=" << FormatShortest(c.epsilon) << '\n';
  os << "data.covariates=";
  AppendList(os, c.covariates);
  os << '\n';
  os << "data.csv_path=" << c.csv_path << '\n';
  os << "data.n=" << c.n << '\n';
  os << "data.outcome=" << c.outcome_column << '\n';
  os << "data.source=" << c.source << '\n';
  os << "data.treatment=" << c.treatment_column << '\n';
  os << "data.x_lo=";
  AppendList(os, c.x_lo);
  os << '\n';
  os << "data.x_hi=";
  AppendList(os, c.x_hi);
  os << '\n';
  os << "data.y_lo=" << (c.have_y_bounds ? FormatShortest(c.y_lo) : "") << '\n';
  os << "data.y_hi=" << (c.have_y_bounds ? FormatShortest(c.y_hi) : "") << '\n';
  os << "learner.bandwidth=" << FormatShortest(c.learner.kernel.bandwidth) << '\n';
  os << "learner.batch=" << c.learner.mlp.batch << '\n';
  os << "learner.clip=" << FormatShortest(c.learner.propensity_clip) << '\n';
  os << "learner.epochs=" << c.learner.mlp.epochs << '\n';
  os << "learner.family="
     << (c.learner.family == LearnerFamily::kKernel ? "kernel" : "nn") << '\n';
  os << "learner.hidden=" << c.learner.mlp.hidden << '\n';
  os << "learner.l2=" << FormatShortest(c.learner.mlp.l2) << '\n';
  os << "learner.learning_rate=" << FormatShortest(c.learner.mlp.learning_rate)
     << '\n';
  os << "learner.ridge=" << FormatShortest(c.learner.kernel.ridge) << '\n';
  os << "learner.split=" << (c.learner.split_nuisance ? "true" : "false")
     << '\n';
  os << "learner.split_fraction=" << FormatShortest(c.learner.split_fraction)
     << '\n';
  os << "optimizer.fd_step_scale=" << FormatShortest(c.optimizer.fd_step_scale)
     << '\n';
  os << "optimizer.max_iterations=" << c.optimizer.max_iterations << '\n';
  os << "optimizer.starts=" << c.optimizer.starts << '\n';
  os << "optimizer.tolerance=" << FormatShortest(c.optimizer.tolerance) << '\n';
  os << "run.alphas=";
  AppendList(os, c.alphas);
  os << '\n';
  os << "run.runs=" << c.runs << '\n';
  os << "run.seed=" << c.seed << '\n';
  os << "run.threads=" << c.threads << '\n';
  os << "sweep.alpha=" << FormatShortest(c.sweep_alpha) << '\n';
  os << "sweep.axis=" << c.sweep_axis << '\n';
  os << "sweep.grid=";
  AppendList(os, c.sweep_grid);
  os << '\n';
  os << "sweep.methods=";
  AppendList(os, c.sweep_methods);
  os << '\n';
  os << "utility.weights=";
  AppendList(os, c.utility_weights);
  os << '\n';
  return os.str();
}

std::string ConfigDigest(const RunConfig& config) {
  const std::string text = CanonicalConfigText(config);
  // FNV-1a, 64 bit.
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char byte : text) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string digest(16, '0');
  for (int i = 15; i >= 0; --i) {
    digest[i] = kHex[hash & 0xf];
    hash >>= 4;
  }
  return digest;
}

PrivacyBudget MakeBudget(const RunConfig& config) {
  return PrivacyBudget(config.epsilon, config.delta, config.ate_fraction);
}

DataSource MakeDataSource(const RunConfig& config) {
  DataSource source;
  source.n = config.n;
  if (config.source == "dataset1") {
    source.spec = Dataset1Spec();
  } else if (config.source == "dataset2") {
    source.spec = Dataset2Spec();
  } else if (config.source == "rct") {
    source.rct = true;
    source.spec.p = 1;
    source.spec.s = 1;
  } else {
    throw ConfigError("data source '" + config.source +
                      "' is not a synthetic design");
  }
  source.spec.seed = config.seed;
  return source;
}

CsvSchema MakeCsvSchema(const RunConfig& config) {
  if (config.covariates.empty()) {
    throw SchemaError("csv source requires data.covariates");
  }
  CsvSchema schema;
  schema.covariates = config.covariates;
  schema.treatment = config.treatment_column;
  schema.outcome = config.outcome_column;
  return schema;
}

DomainBounds MakeBounds(const RunConfig& config) {
  if (!config.have_x_bounds || !config.have_y_bounds) {
    throw SchemaError("csv source requires domain bounds "
                      "(data.x_lo, data.x_hi, data.y_lo, data.y_hi)");
  }
  if (config.x_lo.size() != config.covariates.size() ||
      config.x_hi.size() != config.covariates.size()) {
    throw SchemaError("x_lo/x_hi must list one bound per covariate");
  }
  DomainBounds bounds;
  bounds.x_lo = Eigen::Map<const Eigen::VectorXd>(config.x_lo.data(),
                                                  config.x_lo.size());
  bounds.x_hi = Eigen::Map<const Eigen::VectorXd>(config.x_hi.data(),
                                                  config.x_hi.size());
  bounds.y_lo = config.y_lo;
  bounds.y_hi = config.y_hi;
  bounds.CheckValid();
  return bounds;
}

Method MethodFromName(const std::string& name) {
  if (name == "standard") return Method::kStandard;
  if (name == "naive") return Method::kNaive;
  if (name == "valid_naive") return Method::kValidNaive;
  if (name == "private") return Method::kPrivate;
  if (name == "bootstrap") return Method::kBootstrap;
  if (name == "diff_means") return Method::kDiffMeans;
  throw ConfigError("unknown method '" + name + "'");
}

}  // namespace dpate
