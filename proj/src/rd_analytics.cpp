#include "gmrdr/rd_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace gmrdr {

namespace {

void validate_targets(const SourceParams& params, const DistortionTuple& d) {
  params.validate();
  if (d.targets.size() != static_cast<std::size_t>(params.num_frames)) {
    throw std::invalid_argument("distortion tuple length must equal M");
  }
  for (double t : d.targets) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("all distortion targets must be > 0");
    }
  }
}

}  // namespace

DistortionTuple DistortionTuple::common(double d, int num_frames) {
  DistortionTuple out;
  out.targets.assign(static_cast<std::size_t>(num_frames > 0 ? num_frames : 0),
                     d);
  return out;
}

double log_plus(double x) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("log_plus requires x > 0");
  }
  return std::max(0.0, std::log2(x));
}

double per_frame_rate(double sigma2_w, double d_target) {
  if (!(sigma2_w > 0.0) || !(d_target > 0.0)) {
    throw std::invalid_argument("per_frame_rate requires positive inputs");
  }
  return 0.5 * log_plus(sigma2_w / d_target);
}

std::vector<double> innovation_schedule(const SourceParams& params,
                                        DistortionTuple& d) {
  validate_targets(params, d);
  const std::size_t m = static_cast<std::size_t>(params.num_frames);
  const double rho2 = params.rho * params.rho;

  std::vector<double> s2w(m);
  d.effective.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    if (t == 0) {
      s2w[0] = params.variances[0];
    } else {
      s2w[t] = rho2 * (params.variances[t] / params.variances[t - 1]) *
                   d.effective[t - 1] +
               (1.0 - rho2) * params.variances[t];
    }
    d.effective[t] = std::min(d.targets[t], s2w[t]);
  }
  return s2w;
}

RateReport sum_rate(const SourceParams& params, const DistortionTuple& d) {
  DistortionTuple scheduled = d;
  RateReport report;
  report.innovation_variances = innovation_schedule(params, scheduled);
  report.effective_distortions = scheduled.effective;

  const std::size_t m = report.innovation_variances.size();
  report.rates_bits.resize(m);
  report.sum_rate_bits = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    report.rates_bits[t] =
        per_frame_rate(report.innovation_variances[t], d.targets[t]);
    report.sum_rate_bits += report.rates_bits[t];
  }
  return report;
}

double kstep_variance(const SourceParams& params, const DistortionTuple& d,
                      int t, int k) {
  validate_targets(params, d);
  if (t < 0 || t >= params.num_frames) {
    throw std::invalid_argument("frame index out of range");
  }
  if (k < 0 || k > t + 1) {
    throw std::invalid_argument("step count must satisfy 0 <= k <= t+1");
  }
  const std::size_t ft = static_cast<std::size_t>(t);
  if (k == t + 1) {
    // No description ever received: the predictor is the zero vector.
    return params.variances[ft];
  }
  DistortionTuple scheduled = d;
  innovation_schedule(params, scheduled);

  const std::size_t fs = static_cast<std::size_t>(t - k);
  const double r2k = std::pow(params.rho * params.rho, k);
  return r2k * (params.variances[ft] / params.variances[fs]) *
             scheduled.effective[fs] +
         (1.0 - r2k) * params.variances[ft];
}

DistortionTuple distortion_from_rates(const SourceParams& params,
                                      const std::vector<double>& rates_bits) {
  params.validate();
  if (rates_bits.size() != static_cast<std::size_t>(params.num_frames)) {
    throw std::invalid_argument("rates length must equal M");
  }
  for (double r : rates_bits) {
    if (!(r >= 0.0)) {
      throw std::invalid_argument("all rates must be >= 0");
    }
  }

  const std::size_t m = rates_bits.size();
  const double rho2 = params.rho * params.rho;
  DistortionTuple d;
  d.targets.resize(m);
  double s2w = params.variances[0];
  for (std::size_t t = 0; t < m; ++t) {
    if (t > 0) {
      s2w = rho2 * (params.variances[t] / params.variances[t - 1]) *
                d.targets[t - 1] +
            (1.0 - rho2) * params.variances[t];
    }
    d.targets[t] = s2w * std::exp2(-2.0 * rates_bits[t]);
  }
  d.effective = d.targets;
  return d;
}

}  // namespace gmrdr
