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
// End-to-end acceptance checks.  Each criterion prints exactly one verdict
// line; the exit code is the number of failed criteria.  Tolerances are
// pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpate/aipw.h"
#include "dpate/dataset.h"
#include "dpate/evaluation.h"
#include "dpate/normal.h"
#include "dpate/nuisance.h"
#include "dpate/numeric.h"
#include "dpate/privacy-budget.h"
#include "dpate/privatize.h"
#include "dpate/random.h"
#include "dpate/sensitivity.h"
#include "dpate/synthetic-data.h"

namespace dpate {
namespace {

std::string Fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return std::string(buffer);
}

// --- 1. The two score routes agree pointwise. ------------------------------

bool ScoreIdentity(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  RandomEngine engine(RngStream{1001, 1});
  double worst = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const int a = engine.Uniform() < 0.5 ? 1 : 0;
    const double pi = engine.UniformIn(0.05, 0.95);
    const double y = engine.UniformIn(-10.0, 10.0);
    const double mu0 = engine.UniformIn(-10.0, 10.0);
    const double mu1 = engine.UniformIn(-10.0, 10.0);
    worst = std::max(worst, std::abs(ScoreGamma(a, y, pi, mu0, mu1) -
                                     ScoreCanonical(a, y, pi, mu0, mu1)));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  detail = Fmt("max |difference| %.3g over 1e5 tuples, %.2f s", worst, seconds);
  return worst < 1e-10 && seconds < 1.0;
}

// --- 2. Sandwich variance equals the mean squared centered score. ----------

bool SandwichIdentity(std::string& detail) {
  RandomEngine engine(RngStream{1002, 1});
  double worst = 0.0;
  for (const std::int64_t n : {std::int64_t{3}, std::int64_t{1000},
                               std::int64_t{65537}}) {
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd gamma(n);
      for (std::int64_t i = 0; i < n; ++i) {
        gamma[i] = engine.UniformIn(-10.0, 10.0);
      }
      const ScoreVector sv = ScoreVectorFromGamma(gamma);

      long double mean = 0.0L;
      for (std::int64_t i = 0; i < n; ++i) mean += gamma[i];
      mean /= static_cast<long double>(n);
      long double ss = 0.0L;
      for (std::int64_t i = 0; i < n; ++i) {
        const long double c = static_cast<long double>(gamma[i]) - mean;
        ss += c * c;
      }
      const double oracle =
          static_cast<double>(ss / static_cast<long double>(n));
      const double rel =
          std::abs(SandwichVariance(sv) - oracle) / std::abs(oracle);
      worst = std::max(worst, rel);
    }
  }
  detail = Fmt("max relative error %.3g (tolerance 1e-12)", worst);
  return worst <= 1e-12;
}

// --- 3. Augmented variance exceeds sigma2_dp by exactly n * r_tau^2. -------

bool AugmentedVarianceIdentity(std::string& detail) {
  RandomEngine engine(RngStream{1003, 1});
  double worst = 0.0;
  for (int trial = 0; trial < 2000; ++trial) {
    const double sigma2 = engine.UniformIn(0.0, 20.0);
    const double gamma = engine.UniformIn(1e-3, 10.0);
    const std::int64_t n = 2 + engine.Bounded(100000);
    const double eps = engine.UniformIn(0.01, 3.0);
    const double delta = engine.UniformIn(1e-8, 1e-3);
    const double scale = SmoothScale(gamma, n, eps, delta);
    const double noise_term = static_cast<double>(n) * scale * scale;
    const double v = AugmentedVariance(sigma2, gamma, n, eps, delta);
    // The identity v - sigma2 = n * r^2 is checked relative to the released
    // magnitude; forming the raw difference in doubles would manufacture
    // cancellation noise unrelated to the implementation.
    const double rel =
        std::abs((v - sigma2) - noise_term) / std::max({v, noise_term, 1.0});
    worst = std::max(worst, rel);
  }
  // Reference point: sigma2_dp=2, gamma=1, n=3000, eps1=0.45, delta1=9e-6.
  const double reference = AugmentedVariance(2.0, 1.0, 3000, 0.45, 9e-6);
  const bool reference_ok = std::abs(reference - 10.1127455) < 1e-3;
  detail = Fmt("max relative error %.3g; reference value %.7f", worst,
               reference);
  return worst <= 1e-12 && reference_ok;
}

// --- 4. The released estimate's noise is calibrated standard normal. -------

bool NoiseCalibration(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const int n = 10000;
  const double tau_hat = 0.3;
  RandomEngine engine(RngStream{1004, streams::kAteNoise});
  std::vector<double> standardized(n);
  for (int i = 0; i < n; ++i) {
    const AteRelease release =
        PrivatizeAte(tau_hat, 2.0, 4000, 0.45, 9e-6, engine);
    standardized[i] = (release.tau_dp - tau_hat) / release.r_tau;
  }

  double mean = 0.0;
  for (const double s : standardized) mean += s;
  mean /= n;
  double var = 0.0;
  for (const double s : standardized) var += (s - mean) * (s - mean);
  var /= n - 1;
  const double stdev = std::sqrt(var);

  std::sort(standardized.begin(), standardized.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = NormalCdf(standardized[i]);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  // Asymptotic Kolmogorov-Smirnov critical value at level 0.01.
  const double ks_critical = 1.62762 / std::sqrt(static_cast<double>(n));

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  detail = Fmt("mean %.4f, stdev %.4f, KS %.5f (critical %.5f), %.2f s", mean,
               stdev, ks, ks_critical, seconds);
  return std::abs(mean) <= 0.04 && std::abs(stdev - 1.0) <= 0.05 &&
         ks <= ks_critical && seconds < 5.0;
}

// --- 5 & 6. Desk-scale coverage tables. -------------------------------------

ExperimentConfig TableConfig(bool high_dimensional, std::uint64_t base_seed) {
  ExperimentConfig config;
  config.source.spec = high_dimensional ? Dataset2Spec() : Dataset1Spec();
  config.source.n = 1000;
  config.budget = PrivacyBudget(0.5, 1e-5, 0.9);
  config.alphas = {0.2, 0.1, 0.05};
  config.methods = {Method::kStandard, Method::kNaive, Method::kPrivate};
  config.runs = 200;
  config.base_seed = base_seed;
  config.threads = 1;
  return config;
}

bool CoverageTable(bool high_dimensional, double private_slack,
                   double seconds_limit, std::uint64_t base_seed,
                   std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig config = TableConfig(high_dimensional, base_seed);
  const ExperimentResult result = CoverageExperiment(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  bool ok = seconds < seconds_limit;
  std::ostringstream text;
  for (std::size_t k = 0; k < config.alphas.size(); ++k) {
    const double nominal = 1.0 - config.alphas[k];
    const double standard = result.summary[k].coverage;
    const double naive = result.summary[config.alphas.size() + k].coverage;
    const double priv = result.summary[2 * config.alphas.size() + k].coverage;
    ok = ok && priv >= nominal - private_slack;
    ok = ok && std::abs(standard - nominal) <= 0.06;
    ok = ok && naive <= 0.15;
    text << Fmt(" %.2f: priv %.3f std %.3f naive %.3f;", nominal, priv,
                standard, naive);
  }
  detail = text.str() + Fmt(" %.0f s", seconds);
  return ok;
}

bool CoverageDataset1(std::string& detail) {
  return CoverageTable(/*high_dimensional=*/false, /*private_slack=*/0.05,
                       /*seconds_limit=*/600.0, /*base_seed=*/101, detail);
}

bool CoverageDataset2(std::string& detail) {
  return CoverageTable(/*high_dimensional=*/true, /*private_slack=*/0.06,
                       /*seconds_limit=*/1200.0, /*base_seed=*/202, detail);
}

// --- 7. Private width shrinks with budget and sample size. ------------------

bool WidthMonotonicity(std::string& detail) {
  ExperimentConfig base;
  base.source.spec = Dataset1Spec();
  base.source.n = 1000;
  base.budget = PrivacyBudget(0.5, 1e-5, 0.9);
  base.alphas = {0.05};
  base.methods = {Method::kPrivate};
  base.runs = 10;
  base.base_seed = 303;
  base.threads = 1;

  const SweepResult eps_sweep =
      Sweep(SweepAxis::kEpsilon, {0.1, 0.25, 0.5, 1.0, 2.0}, base);
  bool eps_ok = true;
  std::ostringstream widths;
  widths << " eps widths:";
  for (std::size_t i = 0; i < eps_sweep.points.size(); ++i) {
    widths << Fmt(" %.3f", eps_sweep.points[i].median_width);
    if (i > 0) {
      eps_ok = eps_ok && eps_sweep.points[i].median_width <
                             eps_sweep.points[i - 1].median_width;
    }
  }

  const SweepResult n_sweep =
      Sweep(SweepAxis::kN, {500.0, 1000.0, 3000.0}, base);
  bool n_ok = true;
  widths << "; n widths:";
  for (std::size_t i = 0; i < n_sweep.points.size(); ++i) {
    widths << Fmt(" %.3f", n_sweep.points[i].median_width);
    if (i > 0) {
      n_ok = n_ok &&
             n_sweep.points[i].median_width < n_sweep.points[i - 1].median_width;
    }
  }

  // With an enormous budget the privatization noise vanishes and the private
  // interval must collapse onto the standard one.
  ExperimentConfig rich = base;
  rich.methods = {Method::kStandard, Method::kPrivate};
  const SweepResult huge = Sweep(SweepAxis::kEpsilon, {1e6}, rich);
  const double standard_width = huge.points[0].median_width;
  const double private_width = huge.points[1].median_width;
  const bool limit_ok =
      std::abs(private_width - standard_width) <= 0.01 * standard_width;
  widths << Fmt("; at eps=1e6 priv %.4f vs std %.4f", private_width,
                standard_width);

  detail = widths.str();
  return eps_ok && n_ok && limit_ok;
}

// --- 8. The sensitivity search dominates a dense grid oracle. ---------------

bool SensitivityOracle(std::string& detail) {
  const int grid = 41;
  double worst_tau_margin = 1e300;
  double worst_sigma_margin = 1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GeneratedData gen =
        GenDataset(Dataset1Spec(), 120, RngStream{seed, streams::kData});
    const Dataset& d = gen.dataset;
    const NuisanceModel model =
        FitNuisances(d, LearnerConfig{}, RngStream{seed, streams::kFit});
    const ScoreVector sv = EstimateAte(model, d);
    const SensitivityReport report = ComputeSensitivities(
        model, sv, d, OptimizerConfig{}, RngStream{seed, streams::kSensitivity});

    double grid_tau = 0.0;
    double grid_sigma = 0.0;
    Eigen::MatrixXd gx(grid * grid, 2);
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        gx(i * grid + j, 0) = static_cast<double>(i) / (grid - 1);
        gx(i * grid + j, 1) = static_cast<double>(j) / (grid - 1);
      }
    }
    const double y_lo = d.bounds().y_lo;
    const double y_hi = d.bounds().y_hi;
    for (int arm = 0; arm < 2; ++arm) {
      for (int k = 0; k < grid; ++k) {
        const double y =
            y_lo + (y_hi - y_lo) * static_cast<double>(k) / (grid - 1);
        const Eigen::VectorXd scores = ScoreGammaBatch(
            model, arm, gx, Eigen::VectorXd::Constant(grid * grid, y));
        for (Eigen::Index r = 0; r < scores.size(); ++r) {
          const double dev = std::abs(scores[r] - sv.tau_hat);
          grid_tau = std::max(grid_tau, dev);
          grid_sigma =
              std::max(grid_sigma, std::abs(dev * dev - sv.sigma2_hat));
        }
      }
    }
    worst_tau_margin = std::min(worst_tau_margin, report.gamma_tau - grid_tau);
    worst_sigma_margin =
        std::min(worst_sigma_margin, report.gamma_sigma - grid_sigma);
  }
  detail = Fmt("worst margins over 20 seeds: gamma_tau %+.3g, gamma_sigma "
               "%+.3g (allowed -1e-6)",
               worst_tau_margin, worst_sigma_margin);
  return worst_tau_margin >= -1e-6 && worst_sigma_margin >= -1e-6;
}

// --- 9. Trial coverage for both the private interval and the baseline. ------

bool RctCoverageAndWidth(std::string& detail) {
  ExperimentConfig config;
  config.source.rct = true;
  config.source.n = 1000;
  config.budget = PrivacyBudget(0.5, 1e-5, 0.9);
  config.alphas = {0.05};
  config.methods = {Method::kPrivate, Method::kDiffMeans};
  config.runs = 200;
  config.base_seed = 404;
  config.threads = 1;

  const ExperimentResult result = CoverageExperiment(config);
  const double private_coverage = result.summary[0].coverage;
  const double diff_coverage = result.summary[1].coverage;

  // Paired width comparison over the first ten runs.
  int narrower = 0;
  for (int r = 0; r < 10; ++r) {
    const double private_width = result.per_run[r][0].ci.width();
    const double diff_width = result.per_run[r][1].ci.width();
    if (private_width < diff_width) ++narrower;
  }
  detail = Fmt("coverage priv %.3f diff_means %.3f; private narrower in "
               "%d of 10 paired runs (need >= 9)",
               private_coverage, diff_coverage, narrower);
  return private_coverage >= 0.90 && diff_coverage >= 0.90 && narrower >= 9;
}

// --- 10. Rerunning every CLI command reproduces its bytes. -------------------

std::uint64_t Fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool RunToFile(const std::string& args, const std::string& path) {
  const std::string command =
      std::string(DPATE_CLI_PATH) + " " + args + " >" + path + " 2>/dev/null";
  return std::system(command.c_str()) == 0;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool CliDeterminism(std::string& detail) {
  const std::vector<std::string> commands = {
      "estimate --dataset dataset1 --n 200 --seed 21 --starts 4",
      "coverage --dataset rct --n 120 --runs 2 --seed 22 --alpha 0.05 "
      "--starts 4",
      "sweep --dataset rct --n 100 --runs 2 --seed 23 --starts 4 "
      "--axis epsilon --grid 0.5,1 --methods private --sweep-alpha 0.1",
      "utility --dataset rct --n 100 --runs 2 --seed 24 --starts 4 "
      "--grid 0.5,1 --sweep-alpha 0.1 --weights 0,1 "
      "--bootstrap-replicates 20"};

  std::ostringstream hashes;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const std::string first_path = Fmt("acceptance-cli-%zu-a.txt", i);
    const std::string second_path = Fmt("acceptance-cli-%zu-b.txt", i);
    if (!RunToFile(commands[i], first_path) ||
        !RunToFile(commands[i], second_path)) {
      detail = "command failed: " + commands[i];
      return false;
    }
    const std::string first = Slurp(first_path);
    const std::string second = Slurp(second_path);
    std::remove(first_path.c_str());
    std::remove(second_path.c_str());
    if (first.empty() || Fnv1a(first) != Fnv1a(second) || first != second) {
      detail = "outputs differ for: " + commands[i];
      return false;
    }
    hashes << Fmt(" %016llx",
                  static_cast<unsigned long long>(Fnv1a(first)));
  }
  detail = "stable output hashes:" + hashes.str();
  return true;
}

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace
}  // namespace dpate

int main() {
  using dpate::Criterion;
  const std::vector<Criterion> criteria = {
      {"score-identity", dpate::ScoreIdentity},
      {"sandwich-identity", dpate::SandwichIdentity},
      {"augmented-variance-identity", dpate::AugmentedVarianceIdentity},
      {"noise-calibration", dpate::NoiseCalibration},
      {"coverage-dataset1", dpate::CoverageDataset1},
      {"coverage-dataset2", dpate::CoverageDataset2},
      {"width-monotonicity", dpate::WidthMonotonicity},
      {"sensitivity-oracle", dpate::SensitivityOracle},
      {"rct-coverage-and-width", dpate::RctCoverageAndWidth},
      {"cli-determinism", dpate::CliDeterminism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& error) {
      detail = std::string("exception: ") + error.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %2zu %-28s (%.1f s)  %s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%zu of %zu acceptance criteria passed\n",
              criteria.size() - failures, criteria.size());
  return failures;
}
