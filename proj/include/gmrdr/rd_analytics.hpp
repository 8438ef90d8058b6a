#pragma once

#include <vector>

#include "gmrdr/source_model.hpp"

namespace gmrdr {

// Closed-form rate-distortion quantities for the Gauss-Markov GOP model.
// All rates are in bits per source symbol (base-2 logs); frame indices are
// 0-based.
//
// The innovation variance seen by the frame-t quantizer is
//
//   sigma2_W[0] = sigma_0^2
//   sigma2_W[t] = rho^2 * (sigma_t^2 / sigma_{t-1}^2) * Deff_{t-1}
//               + (1 - rho^2) * sigma_t^2,                         t >= 1
//
// where Deff_t = min(D_t, sigma2_W[t]) is the distortion the DPCM chain
// actually attains at frame t: when the target is not below the residual
// variance the rate clips to zero, the decoder keeps its prediction, and
// the next frame's schedule consumes the clipped value.

// Per-frame distortion targets and, once scheduled, the attained values.
struct DistortionTuple {
  std::vector<double> targets;    // D_t, all > 0
  std::vector<double> effective;  // min(D_t, sigma2_W[t]); filled by
                                  // innovation_schedule

  static DistortionTuple common(double d, int num_frames);
};

struct RateReport {
  std::vector<double> innovation_variances;  // sigma2_W per frame
  std::vector<double> rates_bits;            // R_t = 0.5 log+ (sigma2_W/D_t)
  double sum_rate_bits = 0.0;                // running sum of rates_bits
  std::vector<double> effective_distortions;
};

// max(0, log2 x); x must be > 0.
double log_plus(double x);

// 0.5 * log+ (sigma2_w / d_target); both arguments must be > 0.
double per_frame_rate(double sigma2_w, double d_target);

// Computes sigma2_W for every frame and fills d.effective as it goes.
std::vector<double> innovation_schedule(const SourceParams& params,
                                        DistortionTuple& d);

// Per-frame rates and their sum (the region boundary for targets d).
RateReport sum_rate(const SourceParams& params, const DistortionTuple& d);

// Distortion of the k-step predictor for frame t when the last k
// descriptions are missing:
//
//   sigma2_W[t,k] = rho^(2k) * (sigma_t^2 / sigma_{t-k}^2) * Deff_{t-k}
//                 + (1 - rho^(2k)) * sigma_t^2
//
// Valid for 0 <= k <= t+1. k == t+1 means no description was ever
// received; the predictor is the zero vector and the distortion is
// sigma_t^2.
double kstep_variance(const SourceParams& params, const DistortionTuple& d,
                      int t, int k);

// Sequential inversion: D_t = sigma2_W[t] * 2^(-2 R_t), with sigma2_W[t]
// built from the already-inverted D_{t-1}. Inverse of sum_rate on the
// interior of the region (all rates > 0).
DistortionTuple distortion_from_rates(const SourceParams& params,
                                      const std::vector<double>& rates_bits);

}  // namespace gmrdr
