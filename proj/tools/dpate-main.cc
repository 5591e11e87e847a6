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
//
// dpate: differentially private average-treatment-effect estimation.
//
//   dpate estimate  --csv data.csv ... --eps 0.5   one private release (JSON)
//   dpate coverage  --dataset dataset1 --runs 200  Monte-Carlo coverage (CSV)
//   dpate sweep     --axis epsilon --grid 0.1,...  coverage along one axis
//   dpate utility   --grid 0.1,... --weights ...   privacy-utility trade-off
//
// Every number in the outputs is printed in shortest round-trip form, and
// all randomness derives from --seed, so identical invocations produce
// byte-identical output.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "dpate/dataset.h"
#include "dpate/errors.h"
#include "dpate/evaluation.h"
#include "dpate/numeric.h"
#include "dpate/privatize.h"
#include "dpate/random.h"
#include "dpate/run-config.h"
#include "dpate/synthetic-data.h"

namespace dpate {
namespace {

// One string-valued flag bound to a (section, key) of the run configuration.
// Values pass through ApplyConfigValue, so flags and config files parse and
// validate identically.
struct FlagBinding {
  CLI::Option* option = nullptr;
  std::string section;
  std::string key;
  std::string value;
};

struct CommandArgs {
  CLI::App* cmd = nullptr;
  std::string config_path;
  bool split_flag = false;
  std::vector<std::unique_ptr<FlagBinding>> bindings;
  CLI::Option* dataset_option = nullptr;
  CLI::Option* csv_option = nullptr;

  CLI::Option* Bind(const std::string& name, const std::string& section,
                    const std::string& key, const std::string& help) {
    bindings.push_back(std::make_unique<FlagBinding>());
    FlagBinding* b = bindings.back().get();
    b->section = section;
    b->key = key;
    b->option = cmd->add_option(name, b->value, help);
    return b->option;
  }

  // Defaults, overlaid by the config file, overlaid by flags.
  RunConfig Resolve() const {
    RunConfig config =
        config_path.empty() ? RunConfig{} : ParseConfigFile(config_path);
    // A --csv flag selects the csv source unless --dataset says otherwise.
    if (csv_option != nullptr && csv_option->count() > 0 &&
        dataset_option->count() == 0) {
      ApplyConfigValue(config, "data", "source", "csv");
    }
    for (const auto& b : bindings) {
      if (b->option->count() > 0) {
        ApplyConfigValue(config, b->section, b->key, b->value);
      }
    }
    if (split_flag) ApplyConfigValue(config, "learner", "split", "true");
    return config;
  }
};

void AddCommonFlags(CommandArgs& args) {
  CLI::App* cmd = args.cmd;
  cmd->add_option("--config", args.config_path,
                  "INI-style configuration file; flags override its values");
  args.Bind("--seed", "run", "seed", "Base seed for all randomness");
  args.Bind("--runs", "run", "runs", "Monte-Carlo runs per configuration");
  args.Bind("--alpha", "run", "alphas",
            "Significance level(s), comma separated");
  args.Bind("--threads", "run", "threads", "Worker threads for experiments");
  args.Bind("--out", "run", "out", "Output file (default: stdout)");
  args.Bind("--eps", "budget", "epsilon", "Total privacy budget epsilon");
  args.Bind("--delta", "budget", "delta", "Total privacy budget delta");
  args.Bind("--ate-fraction", "budget", "ate_fraction",
            "Budget fraction spent on the point estimate");
  args.dataset_option =
      args.Bind("--dataset", "data", "source",
                "Data source: dataset1, dataset2, rct, or csv");
  args.csv_option = args.Bind("--csv", "data", "csv_path",
                              "CSV input file (implies --dataset csv)");
  args.Bind("--n", "data", "n", "Sample size for synthetic sources");
  args.Bind("--covariates", "data", "covariates",
            "CSV covariate column names, comma separated");
  args.Bind("--x-lo", "data", "x_lo",
            "Lower covariate bounds, comma separated");
  args.Bind("--x-hi", "data", "x_hi",
            "Upper covariate bounds, comma separated");
  args.Bind("--y-lo", "data", "y_lo", "Lower outcome bound");
  args.Bind("--y-hi", "data", "y_hi", "Upper outcome bound");
  args.Bind("--learner", "learner", "family",
            "Nuisance learner family: kernel or nn");
  args.Bind("--clip", "learner", "clip", "Propensity clipping constant");
  cmd->add_flag("--split", args.split_flag,
                "Fit nuisances on one half, score on the other");
  args.Bind("--split-fraction", "learner", "split_fraction",
            "Fraction of samples in the fitting half");
  args.Bind("--starts", "optimizer", "starts",
            "Random restarts per arm in the sensitivity search");
  args.Bind("--max-iterations", "optimizer", "max_iterations",
            "Ascent iteration cap in the sensitivity search");
  args.Bind("--bootstrap-replicates", "bootstrap", "replicates",
            "Replicates for the bootstrap baseline");
}

void AddSweepFlags(CommandArgs& args) {
  args.Bind("--axis", "sweep", "axis", "Swept parameter: epsilon or n");
  args.Bind("--grid", "sweep", "grid", "Grid values, comma separated");
  args.Bind("--methods", "sweep", "methods",
            "Methods to sweep, comma separated");
  args.Bind("--sweep-alpha", "sweep", "alpha",
            "Single significance level for sweep rows");
}

void WriteText(const RunConfig& config, const std::string& text) {
  if (config.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + config.out);
  out << text;
}

// Materializes the configured data source for a single estimate.
Dataset LoadInput(const RunConfig& config) {
  if (config.source == "csv") {
    if (config.csv_path.empty()) {
      throw ConfigError("csv source requires --csv or data.csv_path");
    }
    const CsvSchema schema = MakeCsvSchema(config);
    const DomainBounds bounds = MakeBounds(config);
    CsvLoadResult loaded = LoadCsv(config.csv_path, schema, bounds);
    if (loaded.dropped_rows > 0) {
      std::cerr << "note: dropped " << loaded.dropped_rows
                << " rows with missing values\n";
    }
    return std::move(loaded.dataset);
  }
  const DataSource source = MakeDataSource(config);
  const RngStream data_stream{config.seed, streams::kData};
  GeneratedData gen = source.rct ? GenRct(source.n, data_stream)
                                 : GenDataset(source.spec, source.n,
                                              data_stream);
  return std::move(gen.dataset);
}

ExperimentConfig MakeExperiment(const RunConfig& config) {
  ExperimentConfig ec;
  ec.source = MakeDataSource(config);
  ec.learner = config.learner;
  ec.optimizer = config.optimizer;
  ec.budget = MakeBudget(config);
  ec.alphas = config.alphas;
  ec.runs = config.runs;
  ec.base_seed = config.seed;
  ec.threads = config.threads;
  ec.bootstrap_replicates = config.bootstrap_replicates;
  return ec;
}

SweepAxis AxisFromName(const std::string& name) {
  if (name == "epsilon") return SweepAxis::kEpsilon;
  if (name == "n") return SweepAxis::kN;
  throw ConfigError("sweep axis must be 'epsilon' or 'n', got '" + name + "'");
}

int RunEstimate(const RunConfig& config) {
  if (config.alphas.empty()) throw ConfigError("at least one alpha required");
  const Dataset d = LoadInput(config);
  DpAteReport report =
      EstimatePrivate(d, config.learner, MakeBudget(config),
                      config.alphas.front(),
                      RngStream{config.seed, streams::kPipeline},
                      config.optimizer);
  report.config_digest = ConfigDigest(config);
  std::cerr << "warning: the privacy budget is not tracked across "
               "invocations; repeated releases on the same data compose\n";
  WriteText(config, ReportToJson(report));
  return 0;
}

int RunCoverage(const RunConfig& config) {
  ExperimentConfig ec = MakeExperiment(config);
  ec.methods = {Method::kStandard, Method::kNaive, Method::kPrivate};
  if (config.source == "rct") ec.methods.push_back(Method::kDiffMeans);
  const ExperimentResult result = CoverageExperiment(ec);
  const std::string digest = ConfigDigest(config);

  std::ostringstream os;
  os << "schema_version,config_digest,method,nominal,runs,hits,coverage,se,"
        "mean_width\n";
  for (const CoverageResult& row : result.summary) {
    os << "1," << digest << ',' << row.method << ','
       << FormatShortest(row.nominal) << ',' << row.runs << ',' << row.hits
       << ',' << FormatShortest(row.coverage) << ',' << FormatShortest(row.se)
       << ',' << FormatShortest(row.mean_width) << '\n';
  }
  WriteText(config, os.str());
  return 0;
}

int RunSweep(const RunConfig& config) {
  const SweepAxis axis = AxisFromName(config.sweep_axis);
  ExperimentConfig base = MakeExperiment(config);
  base.alphas = {config.sweep_alpha};
  base.methods.clear();
  for (const std::string& name : config.sweep_methods) {
    base.methods.push_back(MethodFromName(name));
  }
  const SweepResult result = Sweep(axis, config.sweep_grid, base);
  const std::string digest = ConfigDigest(config);
  const std::string axis_name =
      axis == SweepAxis::kEpsilon ? "epsilon" : "n";

  std::ostringstream os;
  os << "schema_version,config_digest,axis,value,method,nominal,runs,"
        "coverage,median_width\n";
  for (const SweepPoint& p : result.points) {
    os << "1," << digest << ',' << axis_name << ','
       << FormatShortest(p.grid_value) << ',' << p.method << ','
       << FormatShortest(p.nominal) << ',' << p.runs << ','
       << FormatShortest(p.coverage) << ',' << FormatShortest(p.median_width)
       << '\n';
  }
  WriteText(config, os.str());
  return 0;
}

int RunUtility(const RunConfig& config) {
  if (AxisFromName(config.sweep_axis) != SweepAxis::kEpsilon) {
    throw ConfigError("utility curves sweep epsilon only");
  }
  ExperimentConfig base = MakeExperiment(config);
  base.alphas = {config.sweep_alpha};
  base.methods = {Method::kPrivate, Method::kNaive, Method::kBootstrap};
  const SweepResult sweep =
      Sweep(SweepAxis::kEpsilon, config.sweep_grid, base);
  const std::vector<UtilityPoint> points =
      UtilityCurve(sweep, config.utility_weights);
  const std::string digest = ConfigDigest(config);

  std::ostringstream os;
  os << "schema_version,config_digest,epsilon,weight,method,median_width,"
        "utility\n";
  for (const UtilityPoint& p : points) {
    os << "1," << digest << ',' << FormatShortest(p.epsilon) << ','
       << FormatShortest(p.weight) << ',' << p.method << ','
       << FormatShortest(p.median_width) << ',' << FormatShortest(p.utility)
       << '\n';
  }
  WriteText(config, os.str());
  return 0;
}

}  // namespace
}  // namespace dpate

int main(int argc, char** argv) {
  CLI::App app{"Differentially private average treatment effect estimation"};
  app.require_subcommand(1);

  dpate::CommandArgs estimate;
  estimate.cmd = app.add_subcommand(
      "estimate", "One private point estimate and confidence interval");
  dpate::AddCommonFlags(estimate);

  dpate::CommandArgs coverage;
  coverage.cmd = app.add_subcommand(
      "coverage", "Monte-Carlo coverage of every method at every level");
  dpate::AddCommonFlags(coverage);

  dpate::CommandArgs sweep;
  sweep.cmd = app.add_subcommand(
      "sweep", "Coverage and width along an epsilon or sample-size grid");
  dpate::AddCommonFlags(sweep);
  dpate::AddSweepFlags(sweep);

  dpate::CommandArgs utility;
  utility.cmd = app.add_subcommand(
      "utility", "Privacy-utility trade-off along an epsilon grid");
  dpate::AddCommonFlags(utility);
  dpate::AddSweepFlags(utility);
  utility.Bind("--weights", "utility", "weights",
               "Privacy weights in [0,1], comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (estimate.cmd->parsed()) return dpate::RunEstimate(estimate.Resolve());
    if (coverage.cmd->parsed()) return dpate::RunCoverage(coverage.Resolve());
    if (sweep.cmd->parsed()) return dpate::RunSweep(sweep.Resolve());
    return dpate::RunUtility(utility.Resolve());
  } catch (const dpate::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
