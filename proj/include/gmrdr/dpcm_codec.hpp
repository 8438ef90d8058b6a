#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmrdr/rd_analytics.hpp"
#include "gmrdr/source_model.hpp"

namespace gmrdr {

struct CodecTrace {
  FrameMatrix reconstructions;                // xhat, same shape as input
  std::vector<double> residual_variances_used;  // sigma2_W per frame
  RateReport report;                          // analytic rate accounting
};

// Description of a residual vector w through the Gaussian test channel
// W = What + Z, What ~ N(0, sigma2_w - d_eff), Z ~ N(0, d_eff), What _|_ Z:
// conditioned on the observed w,
//
//   What_i = a * w_i + V_i,  a = (sigma2_w - d_eff) / sigma2_w,
//   V_i ~ N(0, a * d_eff) i.i.d.
//
// which gives E[(W - What)^2] = d_eff, Var(What) = sigma2_w - d_eff and
// Cov(What, W - What) = 0. Requires 0 < d_eff <= sigma2_w; at equality the
// output is identically zero.
std::vector<double> test_channel_sample(std::span<const double> w,
                                        double sigma2_w, double d_eff,
                                        std::uint64_t seed);

// Runs the idealized DPCM chain over one GOP. Per frame t the prediction is
// P_t = rho * (sigma_t / sigma_{t-1}) * xhat_{t-1} (P_0 = 0), the residual
// W_t = x_t - P_t is described through the test channel at distortion
// Deff_t, and xhat_t = P_t + What_t. Frames with D_t >= sigma2_W[t] send
// nothing: What_t is exactly zero and xhat_t = P_t. Rates are accounted
// analytically; there is no bitstream.
CodecTrace encode_decode_gop(const FrameMatrix& x, const SourceParams& params,
                             const DistortionTuple& d, std::uint64_t seed);

}  // namespace gmrdr
