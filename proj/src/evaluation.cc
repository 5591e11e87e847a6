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

#include "dpate/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "dpate/errors.h"
#include "dpate/normal.h"
#include "dpate/numeric.h"

namespace dpate {
namespace {

double ZQuantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("alpha must lie strictly in (0, 1)");
  }
  return NormalQuantile(1.0 - alpha / 2.0);
}

Interval CenteredInterval(double center, double half_width) {
  return Interval{center - half_width, center + half_width};
}

// Runs fn(0..count-1) on up to `threads` workers.  Results must be written
// to per-index slots by the callback; any exception aborts the whole loop
// and the one thrown by the smallest index is rethrown.
void ParallelFor(std::int64_t count, int threads,
                 const std::function<void(std::int64_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(
      std::min<std::int64_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

}  // namespace

Interval StandardCi(const ScoreVector& sv, double alpha) {
  const auto n = static_cast<double>(sv.gamma.size());
  return CenteredInterval(sv.tau_hat,
                          ZQuantile(alpha) * std::sqrt(sv.sigma2_hat / n));
}

Interval NaiveCi(double tau_dp, double sigma2_hat, std::int64_t n,
                 double alpha) {
  return CenteredInterval(
      tau_dp,
      ZQuantile(alpha) * std::sqrt(sigma2_hat / static_cast<double>(n)));
}

Interval ValidNaiveCi(double tau_dp, double sigma2_hat, double gamma_tau,
                      std::int64_t n, double eps1, double delta1,
                      double alpha) {
  const double v = AugmentedVariance(sigma2_hat, gamma_tau, n, eps1, delta1);
  return CenteredInterval(
      tau_dp, ZQuantile(alpha) * std::sqrt(v / static_cast<double>(n)));
}

Interval DpDiffMeansCi(const Dataset& d, const PrivacyBudget& budget,
                       double alpha, const RngStream& stream) {
  ValidateDataset(d);
  const double z = ZQuantile(alpha);
  const double range = d.bounds().y_hi - d.bounds().y_lo;
  RandomEngine engine(stream);

  double mean_dp[2];
  double sampling_var[2];
  double noise_var[2];
  for (int arm = 0; arm < 2; ++arm) {
    const std::int64_t n_arm = d.ArmCount(arm);
    if (n_arm < 2) {
      throw SingleArmError("difference of means requires >= 2 samples per arm");
    }
    double sum = 0.0;
    for (std::int64_t i = 0; i < d.size(); ++i) {
      if (d.a()[i] == arm) {
        sum += std::clamp(d.y()[i], d.bounds().y_lo, d.bounds().y_hi);
      }
    }
    const double mean = sum / static_cast<double>(n_arm);
    double ss = 0.0;
    for (std::int64_t i = 0; i < d.size(); ++i) {
      if (d.a()[i] == arm) {
        const double c =
            std::clamp(d.y()[i], d.bounds().y_lo, d.bounds().y_hi) - mean;
        ss += c * c;
      }
    }
    sampling_var[arm] =
        ss / static_cast<double>(n_arm - 1) / static_cast<double>(n_arm);

    // Replacing one sample moves the clipped mean by at most range/n_arm;
    // each arm consumes half of (epsilon, delta).
    const double sensitivity = range / static_cast<double>(n_arm);
    const double sigma =
        std::sqrt(2.0 * std::log(1.25 / (budget.delta() / 2.0))) *
        sensitivity / (budget.epsilon() / 2.0);
    noise_var[arm] = sigma * sigma;
    mean_dp[arm] = mean + sigma * engine.Gaussian();
  }

  const double center = mean_dp[1] - mean_dp[0];
  const double variance =
      sampling_var[1] + sampling_var[0] + noise_var[1] + noise_var[0];
  return CenteredInterval(center, z * std::sqrt(variance));
}

Interval BootstrapCi(const Dataset& d, const LearnerConfig& learner,
                     const PrivacyBudget& budget, double alpha, int replicates,
                     const RngStream& stream,
                     const OptimizerConfig& optimizer) {
  if (replicates < 1) throw ConfigError("bootstrap requires >= 1 replicate");
  const PipelineResult detailed = EstimatePrivateDetailed(
      d, learner, optimizer, budget, alpha, stream.Child(1));
  const Eigen::VectorXd& gamma = detailed.scores.gamma;
  const std::int64_t n = gamma.size();

  // Each replicate is privatized under an equal share of the variance
  // budget, so releasing all of them composes to (eps2, delta2).
  const double eps_b =
      detailed.report.split.eps2 / static_cast<double>(replicates);
  const double delta_b =
      detailed.report.split.delta2 / static_cast<double>(replicates);
  const double r_b =
      SmoothScale(detailed.report.gamma_tau, n, eps_b, delta_b);

  RandomEngine engine(stream.Child(2));
  std::vector<double> stats(replicates);
  std::vector<double> resample(n);
  for (int b = 0; b < replicates; ++b) {
    for (std::int64_t i = 0; i < n; ++i) {
      resample[i] = gamma[static_cast<Eigen::Index>(
          engine.Bounded(static_cast<std::uint64_t>(n)))];
    }
    const double mean =
        PairwiseMean([&](std::int64_t i) { return resample[i]; }, n);
    stats[b] = mean + r_b * engine.Gaussian();
  }
  std::sort(stats.begin(), stats.end());

  // Percentile interval re-centred at the released estimate.
  const double tau_hat = detailed.scores.tau_hat;
  const double tau_dp = detailed.report.tau_dp;
  const double lo = SortedQuantile(stats, alpha / 2.0);
  const double hi = SortedQuantile(stats, 1.0 - alpha / 2.0);
  return Interval{tau_dp + (lo - tau_hat), tau_dp + (hi - tau_hat)};
}

std::string MethodName(Method method) {
  switch (method) {
    case Method::kStandard:
      return "standard";
    case Method::kNaive:
      return "naive";
    case Method::kValidNaive:
      return "valid_naive";
    case Method::kPrivate:
      return "private";
    case Method::kBootstrap:
      return "bootstrap";
    case Method::kDiffMeans:
      return "diff_means";
  }
  throw ConfigError("unknown method");
}

namespace {

void CheckExperimentConfig(const ExperimentConfig& config) {
  if (config.runs < 1) throw ConfigError("experiment requires runs >= 1");
  if (config.alphas.empty()) {
    throw ConfigError("experiment requires at least one alpha level");
  }
  for (const double alpha : config.alphas) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw ConfigError("alpha must lie strictly in (0, 1)");
    }
  }
  if (config.methods.empty()) {
    throw ConfigError("experiment requires at least one method");
  }
  if (config.threads < 1) throw ConfigError("threads must be >= 1");
}

std::vector<RunMethodRecord> RunOnce(const ExperimentConfig& config,
                                     std::uint64_t seed, double tau_true) {
  const GeneratedData data =
      config.source.rct
          ? GenRct(config.source.n, RngStream(seed, streams::kData))
          : GenDataset(config.source.spec, config.source.n,
                       RngStream(seed, streams::kData));
  const PipelineResult detailed = EstimatePrivateDetailed(
      data.dataset, config.learner, config.optimizer, config.budget,
      config.alphas.front(), RngStream(seed, streams::kPipeline));
  const DpAteReport& report = detailed.report;
  const std::int64_t n = report.n;

  std::vector<RunMethodRecord> records;
  records.reserve(config.methods.size() * config.alphas.size());
  for (const Method method : config.methods) {
    for (const double alpha : config.alphas) {
      RunMethodRecord record;
      record.method = method;
      record.alpha = alpha;
      switch (method) {
        case Method::kStandard:
          record.ci = StandardCi(detailed.scores, alpha);
          break;
        case Method::kNaive:
          record.ci = NaiveCi(report.tau_dp, detailed.scores.sigma2_hat, n,
                              alpha);
          break;
        case Method::kValidNaive:
          record.ci = ValidNaiveCi(report.tau_dp, detailed.scores.sigma2_hat,
                                   report.gamma_tau, n, report.split.eps1,
                                   report.split.delta1, alpha);
          break;
        case Method::kPrivate: {
          const auto ci = DpConfidenceInterval(report.tau_dp, report.v_dp, n,
                                               alpha);
          record.ci = Interval{ci.first, ci.second};
          break;
        }
        case Method::kBootstrap:
          record.ci = BootstrapCi(data.dataset, config.learner, config.budget,
                                  alpha, config.bootstrap_replicates,
                                  RngStream(seed, streams::kBootstrap),
                                  config.optimizer);
          break;
        case Method::kDiffMeans:
          record.ci = DpDiffMeansCi(data.dataset, config.budget, alpha,
                                    RngStream(seed, streams::kDiffMeans));
          break;
      }
      record.hit = record.ci.Contains(tau_true);
      records.push_back(record);
    }
  }
  return records;
}

}  // namespace

ExperimentResult CoverageExperiment(const ExperimentConfig& config) {
  CheckExperimentConfig(config);
  const double tau_true = config.source.spec.tau_true;

  ExperimentResult result;
  result.tau_true = tau_true;
  result.per_run.resize(config.runs);

  ParallelFor(config.runs, config.threads, [&](std::int64_t r) {
    result.per_run[r] = RunOnce(
        config, config.base_seed + static_cast<std::uint64_t>(r), tau_true);
  });

  // Aggregation in run order, independent of the thread schedule above.
  std::size_t slot = 0;
  for (const Method method : config.methods) {
    for (const double alpha : config.alphas) {
      CoverageResult aggregate;
      aggregate.method = MethodName(method);
      aggregate.nominal = 1.0 - alpha;
      aggregate.runs = config.runs;
      for (int r = 0; r < config.runs; ++r) {
        aggregate.hits += result.per_run[r][slot].hit ? 1 : 0;
      }
      aggregate.coverage = static_cast<double>(aggregate.hits) /
                           static_cast<double>(config.runs);
      aggregate.se = std::sqrt(aggregate.coverage * (1.0 - aggregate.coverage) /
                               static_cast<double>(config.runs));
      aggregate.mean_width = PairwiseMean(
          [&](std::int64_t r) { return result.per_run[r][slot].ci.width(); },
          config.runs);
      result.summary.push_back(std::move(aggregate));
      ++slot;
    }
  }
  return result;
}

SweepResult Sweep(SweepAxis axis, const std::vector<double>& grid,
                  const ExperimentConfig& base) {
  if (grid.empty()) throw ConfigError("sweep requires a non-empty grid");
  SweepResult result;
  result.axis = axis;
  for (const double value : grid) {
    ExperimentConfig config = base;
    if (axis == SweepAxis::kEpsilon) {
      config.budget = PrivacyBudget(value, base.budget.delta(),
                                    base.budget.ate_fraction());
    } else {
      if (!(value >= 2.0)) throw ConfigError("sweep over n requires n >= 2");
      config.source.n = static_cast<std::int64_t>(value);
    }
    const ExperimentResult experiment = CoverageExperiment(config);

    std::size_t slot = 0;
    for (const Method method : config.methods) {
      for (const double alpha : config.alphas) {
        SweepPoint point;
        point.grid_value = value;
        point.method = MethodName(method);
        point.nominal = 1.0 - alpha;
        point.runs = config.runs;
        point.coverage = experiment.summary[slot].coverage;
        std::vector<double> widths(config.runs);
        for (int r = 0; r < config.runs; ++r) {
          widths[r] = experiment.per_run[r][slot].ci.width();
        }
        point.median_width = Median(std::move(widths));
        result.points.push_back(std::move(point));
        ++slot;
      }
    }
  }
  return result;
}

std::vector<UtilityPoint> UtilityCurve(const SweepResult& sweep,
                                       const std::vector<double>& weights) {
  if (sweep.axis != SweepAxis::kEpsilon) {
    throw ConfigError("utility curves require an epsilon sweep");
  }
  if (sweep.points.empty()) throw ConfigError("utility requires sweep points");
  for (const double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw ConfigError("utility weights must lie in [0, 1]");
    }
  }
  double eps_max = 0.0;
  double width_max = 0.0;
  for (const SweepPoint& point : sweep.points) {
    eps_max = std::max(eps_max, point.grid_value);
    width_max = std::max(width_max, point.median_width);
  }

  std::vector<UtilityPoint> curve;
  curve.reserve(sweep.points.size() * weights.size());
  for (const SweepPoint& point : sweep.points) {
    for (const double w : weights) {
      UtilityPoint u;
      u.epsilon = point.grid_value;
      u.weight = w;
      u.method = point.method;
      u.median_width = point.median_width;
      const double privacy_score = 1.0 - point.grid_value / eps_max;
      const double width_score =
          width_max > 0.0 ? 1.0 - point.median_width / width_max : 1.0;
      u.utility = w * privacy_score + (1.0 - w) * width_score;
      curve.push_back(u);
    }
  }
  return curve;
}

}  // namespace dpate
