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

#include "dpate/sensitivity.h"

#include <cmath>
#include <sstream>

#include "dpate/errors.h"

namespace dpate {
namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxBacktracks = 40;

std::string DescribePoint(int arm, const Eigen::VectorXd& x, double y) {
  std::ostringstream os;
  os << "arm=" << arm << ", x=(";
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (j > 0) os << ", ";
    os << x[j];
  }
  os << "), y=" << y;
  return os.str();
}

// Evaluates |f| for one arm at a block of (x, y) points, checking that every
// value is finite.
class AbsObjective {
 public:
  AbsObjective(const BoxObjective& f, int arm) : f_(f), arm_(arm) {}

  Eigen::VectorXd Evaluate(const Eigen::MatrixXd& points) const {
    const Eigen::Index p = points.cols() - 1;
    const Eigen::MatrixXd x = points.leftCols(p);
    const Eigen::VectorXd y = points.col(p);
    Eigen::VectorXd values = f_(arm_, x, y).cwiseAbs();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw NonFiniteObjectiveError(
            DescribePoint(arm_, x.row(i).transpose(), y[i]));
      }
    }
    return values;
  }

  double Evaluate(const Eigen::VectorXd& point) const {
    return Evaluate(Eigen::MatrixXd(point.transpose()))[0];
  }

 private:
  const BoxObjective& f_;
  int arm_;
};

struct AscentOutcome {
  double value = 0.0;
  Eigen::VectorXd point;
  int iterations = 0;
};

// Projected gradient ascent on |f| from one start point.  The gradient uses
// central differences with probes clamped to the box; the step denominator
// is the realized displacement, which degrades gracefully to a one-sided
// difference at the boundary.
AscentOutcome AscendFrom(const AbsObjective& objective,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                         const OptimizerConfig& config, Eigen::VectorXd start) {
  const Eigen::Index dims = lo.size();
  const Eigen::VectorXd range = hi - lo;
  const double max_range = range.maxCoeff();

  AscentOutcome out;
  out.point = std::move(start);
  out.value = objective.Evaluate(out.point);
  if (max_range <= 0.0) return out;  // Degenerate box: nothing to search.

  double step = 0.0;  // Set from the first gradient.
  int flat_steps = 0;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    // Batched finite-difference gradient.
    Eigen::MatrixXd probes(2 * dims, dims);
    for (Eigen::Index j = 0; j < dims; ++j) {
      Eigen::VectorXd up = out.point;
      Eigen::VectorXd down = out.point;
      const double h = config.fd_step_scale * range[j];
      up[j] = std::min(up[j] + h, hi[j]);
      down[j] = std::max(down[j] - h, lo[j]);
      probes.row(2 * j) = up.transpose();
      probes.row(2 * j + 1) = down.transpose();
    }
    const Eigen::VectorXd probe_values = objective.Evaluate(probes);
    Eigen::VectorXd gradient = Eigen::VectorXd::Zero(dims);
    for (Eigen::Index j = 0; j < dims; ++j) {
      const double denom = probes(2 * j, j) - probes(2 * j + 1, j);
      if (denom > 0.0) {
        gradient[j] = (probe_values[2 * j] - probe_values[2 * j + 1]) / denom;
      }
    }
    const double g_norm = gradient.lpNorm<Eigen::Infinity>();
    if (g_norm == 0.0) break;
    if (step <= 0.0) step = 0.25 * max_range / g_norm;

    ++out.iterations;
    double s = 2.0 * step;
    bool accepted = false;
    for (int back = 0; back < kMaxBacktracks; ++back) {
      const Eigen::VectorXd candidate =
          (out.point + s * gradient).cwiseMax(lo).cwiseMin(hi);
      const double move = (candidate - out.point).dot(gradient);
      if (move <= 0.0) {
        // Projection absorbed the step (boundary) or the step underflowed.
        if ((candidate - out.point).lpNorm<Eigen::Infinity>() == 0.0) break;
        s *= 0.5;
        continue;
      }
      const double candidate_value = objective.Evaluate(candidate);
      if (candidate_value >= out.value + kArmijoSlope * move) {
        const double improvement = candidate_value - out.value;
        out.point = candidate;
        out.value = candidate_value;
        step = s;
        accepted = true;
        flat_steps = improvement <= config.tolerance * (1.0 + out.value)
                         ? flat_steps + 1
                         : 0;
        break;
      }
      s *= 0.5;
    }
    if (!accepted || flat_steps >= 2) break;
  }
  return out;
}

}  // namespace

MaximizeResult MaximizeAbsOverDomain(const BoxObjective& f,
                                     const DomainBounds& bounds,
                                     const OptimizerConfig& config,
                                     const RngStream& stream,
                                     const std::vector<DomainPoint>& extra_starts) {
  if (config.starts < 0 || config.max_iterations < 0) {
    throw ConfigError("optimizer starts and iterations must be non-negative");
  }
  bounds.CheckValid();
  const int p = bounds.dim();
  Eigen::VectorXd lo(p + 1);
  Eigen::VectorXd hi(p + 1);
  lo.head(p) = bounds.x_lo;
  hi.head(p) = bounds.x_hi;
  lo[p] = bounds.y_lo;
  hi[p] = bounds.y_hi;

  RandomEngine engine(stream);
  MaximizeResult result;
  bool have_best = false;

  for (int arm = 0; arm < 2; ++arm) {
    const AbsObjective objective(f, arm);

    std::vector<Eigen::VectorXd> starts;
    for (const DomainPoint& extra : extra_starts) {
      if (extra.arm != arm) continue;
      Eigen::VectorXd u(p + 1);
      u.head(p) = extra.x;
      u[p] = extra.y;
      starts.push_back(u.cwiseMax(lo).cwiseMin(hi));
    }
    // All random starts are drawn before any ascent so the sequence of
    // draws does not depend on how long individual ascents run.
    for (int s = 0; s < config.starts; ++s) {
      Eigen::VectorXd u(p + 1);
      for (int j = 0; j <= p; ++j) u[j] = engine.UniformIn(lo[j], hi[j]);
      starts.push_back(std::move(u));
    }

    for (std::size_t s = 0; s < starts.size(); ++s) {
      AscentOutcome outcome =
          AscendFrom(objective, lo, hi, config, starts[s]);
      StartRecord record;
      record.arm = arm;
      record.start_index = static_cast<int>(s);
      record.value = outcome.value;
      record.iterations = outcome.iterations;
      result.trace.push_back(record);
      if (!have_best || outcome.value > result.value) {
        have_best = true;
        result.value = outcome.value;
        result.argmax.arm = arm;
        result.argmax.x = outcome.point.head(p);
        result.argmax.y = outcome.point[p];
      }
    }
  }
  if (!have_best) {
    throw ConfigError("sensitivity search needs at least one start point");
  }
  return result;
}

namespace {

// Best training sample per arm under |f|, used to seed the search so the
// returned supremum dominates the empirical maximum.
std::vector<DomainPoint> TrainingStarts(const BoxObjective& f,
                                        const Dataset& d) {
  std::vector<DomainPoint> starts;
  for (int arm = 0; arm < 2; ++arm) {
    const Eigen::VectorXd values = f(arm, d.x(), d.y()).cwiseAbs();
    Eigen::Index best = 0;
    values.maxCoeff(&best);
    starts.push_back(DomainPoint{arm, d.x().row(best).transpose(), d.y()[best]});
  }
  return starts;
}

}  // namespace

MaximizeResult GammaTau(const NuisanceModel& model, const ScoreVector& sv,
                        const Dataset& d, const OptimizerConfig& config,
                        const RngStream& stream) {
  const double tau = sv.tau_hat;
  // The explicit return type materializes the expression while its
  // temporaries are still alive; a deduced return type would hand the
  // std::function a dangling expression template.
  const BoxObjective f = [&model, tau](int arm, const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& y)
      -> Eigen::VectorXd {
    return ScoreGammaBatch(model, arm, x, y).array() - tau;
  };
  return MaximizeAbsOverDomain(f, d.bounds(), config, stream,
                               TrainingStarts(f, d));
}

MaximizeResult GammaSigma(const NuisanceModel& model, const ScoreVector& sv,
                          const Dataset& d, const OptimizerConfig& config,
                          const RngStream& stream) {
  const double tau = sv.tau_hat;
  const double sigma2 = sv.sigma2_hat;
  const BoxObjective f = [&model, tau, sigma2](int arm,
                                               const Eigen::MatrixXd& x,
                                               const Eigen::VectorXd& y)
      -> Eigen::VectorXd {
    const Eigen::ArrayXd centered =
        ScoreGammaBatch(model, arm, x, y).array() - tau;
    return centered.square() - sigma2;
  };
  return MaximizeAbsOverDomain(f, d.bounds(), config, stream,
                               TrainingStarts(f, d));
}

SensitivityReport ComputeSensitivities(const NuisanceModel& model,
                                       const ScoreVector& sv, const Dataset& d,
                                       const OptimizerConfig& config,
                                       const RngStream& stream) {
  MaximizeResult tau = GammaTau(model, sv, d, config, stream.Child(1));
  MaximizeResult sigma = GammaSigma(model, sv, d, config, stream.Child(2));
  SensitivityReport report;
  report.gamma_tau = tau.value;
  report.gamma_sigma = sigma.value;
  report.argmax_tau = std::move(tau.argmax);
  report.argmax_sigma = std::move(sigma.argmax);
  report.trace_tau = std::move(tau.trace);
  report.trace_sigma = std::move(sigma.trace);
  return report;
}

double SmoothScale(double gamma, std::int64_t n, double eps, double delta) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("sensitivity must be finite and non-negative");
  }
  if (n < 2) throw DomainError("smooth scale requires n >= 2");
  if (!(eps > 0.0)) throw InvalidBudgetError("epsilon share must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidBudgetError("delta share must lie strictly in (0, 1)");
  }
  const double nd = static_cast<double>(n);
  return gamma * 5.0 * std::sqrt(2.0 * std::log(nd) * std::log(2.0 / delta)) /
         (eps * nd);
}

}  // namespace dpate
