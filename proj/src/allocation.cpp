#include "gmrdr/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>

namespace gmrdr {

namespace {

constexpr double kBudgetTol = 1e-9;  // bits

AllocationResult zero_rate_result(const SourceParams& params) {
  AllocationResult out;
  out.distortions.targets = params.variances;
  out.report = sum_rate(params, out.distortions);
  out.distortions.effective = out.report.effective_distortions;
  return out;
}

double rate_at_common(const SourceParams& params, double d) {
  DistortionTuple tuple = DistortionTuple::common(d, params.num_frames);
  return sum_rate(params, tuple).sum_rate_bits;
}

// Minimizes a unimodal slice on [a, b] by golden-section search.
double golden_min(const std::function<double(double)>& f, double a, double b,
                  int iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace

AllocationResult allocate_common_distortion(const SourceParams& params,
                                            double budget_bits) {
  params.validate();
  if (!(budget_bits >= 0.0)) {
    throw std::invalid_argument("budget must be >= 0 bits");
  }
  const double max_var =
      *std::max_element(params.variances.begin(), params.variances.end());
  if (budget_bits == 0.0) {
    AllocationResult out = zero_rate_result(params);
    out.objective_value = max_var;
    return out;
  }

  // Bisect on log2(D). The lower bracket makes the first frame alone
  // exceed the budget; the upper bracket has zero rate.
  double lo = std::max(-1000.0,
                       std::log2(params.variances[0]) - 2.0 * budget_bits - 2.0);
  double hi = std::log2(max_var);
  double best_d = std::exp2(hi);
  double best_residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  for (; iterations < 200; ++iterations) {
    const double mid = 0.5 * (lo + hi);
    const double d = std::exp2(mid);
    const double residual = rate_at_common(params, d) - budget_bits;
    if (std::abs(residual) < best_residual) {
      best_residual = std::abs(residual);
      best_d = d;
    }
    if (best_residual <= kBudgetTol) {
      ++iterations;
      break;
    }
    if (residual > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  AllocationResult out;
  out.distortions = DistortionTuple::common(best_d, params.num_frames);
  out.report = sum_rate(params, out.distortions);
  out.distortions.effective = out.report.effective_distortions;
  out.objective_value = best_d;
  out.iterations = iterations;
  return out;
}

AllocationResult allocate_min_weighted_distortion(
    const SourceParams& params, double budget_bits,
    const std::vector<double>& weights) {
  params.validate();
  if (!(budget_bits >= 0.0)) {
    throw std::invalid_argument("budget must be >= 0 bits");
  }
  if (weights.size() != static_cast<std::size_t>(params.num_frames)) {
    throw std::invalid_argument("weights length must equal M");
  }
  for (double w : weights) {
    if (!(w > 0.0)) {
      throw std::invalid_argument("all weights must be > 0");
    }
  }

  const std::size_t m = static_cast<std::size_t>(params.num_frames);
  const auto& caps = params.variances;  // zero-rate schedule values

  if (budget_bits == 0.0) {
    AllocationResult out = zero_rate_result(params);
    out.objective_value = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      out.objective_value += weights[t] * out.distortions.targets[t];
    }
    return out;
  }

  // Search bounds per coordinate, in log-distortion. The floor is loose
  // enough that no feasible optimum can sit below it.
  std::vector<double> u_lo(m), u_hi(m);
  for (std::size_t t = 0; t < m; ++t) {
    u_hi[t] = std::log(caps[t]);
    u_lo[t] = std::max(-700.0, u_hi[t] - 2.0 * std::log(2.0) * budget_bits *
                                       params.num_frames -
                                   40.0);
  }

  const AllocationResult common = allocate_common_distortion(params, budget_bits);
  std::vector<double> u_start(m);
  for (std::size_t t = 0; t < m; ++t) {
    u_start[t] = std::min(std::log(common.distortions.targets[t]), u_hi[t]);
  }

  DistortionTuple tuple;
  tuple.targets.resize(m);
  const auto lagrangian = [&](const std::vector<double>& u, double lambda,
                              double* rate_out) {
    for (std::size_t t = 0; t < m; ++t) {
      tuple.targets[t] = std::exp(u[t]);
    }
    const RateReport report = sum_rate(params, tuple);
    double objective = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      objective += weights[t] * tuple.targets[t];
    }
    if (rate_out != nullptr) {
      *rate_out = report.sum_rate_bits;
    }
    return objective + lambda * report.sum_rate_bits;
  };

  int sweeps_total = 0;
  // Coordinate descent on the Lagrangian for a fixed multiplier. Each
  // coordinate slice is scanned on a coarse grid and refined by
  // golden-section inside the best bracket.
  const auto solve_inner = [&](double lambda, double* rate_out) {
    std::vector<double> u = u_start;
    constexpr int kGrid = 48;
    for (int sweep = 0; sweep < 40; ++sweep) {
      ++sweeps_total;
      double max_step = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double prev = u[t];
        const double span = u_hi[t] - u_lo[t];
        int best_idx = 0;
        double best_val = std::numeric_limits<double>::infinity();
        for (int g = 0; g <= kGrid; ++g) {
          u[t] = u_lo[t] + span * g / kGrid;
          const double val = lagrangian(u, lambda, nullptr);
          if (val < best_val) {
            best_val = val;
            best_idx = g;
          }
        }
        const double a = u_lo[t] + span * std::max(0, best_idx - 1) / kGrid;
        const double b = u_lo[t] + span * std::min(kGrid, best_idx + 1) / kGrid;
        u[t] = golden_min(
            [&](double v) {
              u[t] = v;
              return lagrangian(u, lambda, nullptr);
            },
            a, b, 48);
        max_step = std::max(max_step, std::abs(u[t] - prev));
      }
      if (max_step < 1e-10 && sweep > 0) {
        break;
      }
    }
    lagrangian(u, lambda, rate_out);
    return u;
  };

  const auto rate_of = [&](double lambda, std::vector<double>* u_out) {
    double rate = 0.0;
    std::vector<double> u = solve_inner(lambda, &rate);
    if (u_out != nullptr) {
      *u_out = std::move(u);
    }
    return rate;
  };

  // Bracket the multiplier: rate decreases as lambda grows.
  double lambda_hi = 1.0;
  double rate_hi = rate_of(lambda_hi, nullptr);
  int doublings = 0;
  while (rate_hi > budget_bits && doublings < 200) {
    lambda_hi *= 2.0;
    rate_hi = rate_of(lambda_hi, nullptr);
    ++doublings;
  }
  double lambda_lo = 0.0;

  std::vector<double> best_u;
  double best_objective = std::numeric_limits<double>::infinity();
  const auto consider = [&](const std::vector<double>& u, double rate) {
    if (rate > budget_bits + kBudgetTol) {
      return;
    }
    double objective = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      objective += weights[t] * std::exp(u[t]);
    }
    if (objective < best_objective) {
      best_objective = objective;
      best_u = u;
    }
  };
  {
    std::vector<double> u;
    const double rate = rate_of(lambda_hi, &u);
    consider(u, rate);
  }

  for (int iter = 0; iter < 80; ++iter) {
    const double lambda = 0.5 * (lambda_lo + lambda_hi);
    std::vector<double> u;
    const double rate = rate_of(lambda, &u);
    consider(u, rate);
    if (std::abs(rate - budget_bits) <= kBudgetTol) {
      break;
    }
    if (rate > budget_bits) {
      lambda_lo = lambda;
    } else {
      lambda_hi = lambda;
    }
  }

  if (best_u.empty()) {
    // No feasible iterate seen; fall back to the zero-rate point.
    best_u = u_hi;
    best_objective = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
      best_objective += weights[t] * caps[t];
    }
  }

  AllocationResult out;
  out.distortions.targets.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    out.distortions.targets[t] = std::exp(best_u[t]);
  }
  out.report = sum_rate(params, out.distortions);
  out.distortions.effective = out.report.effective_distortions;
  out.objective_value = best_objective;
  out.iterations = sweeps_total;
  return out;
}

}  // namespace gmrdr
