#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gmrdr {

// Gauss-Markov group-of-pictures model: M frames of n pixels each. Pixels
// are independent across space; each pixel column follows an AR(1) law
// across frames:
//
//   X_1(i) ~ N(0, sigma_1^2)
//   X_t(i) = rho * (sigma_t / sigma_{t-1}) * X_{t-1}(i) + N_t(i),  t > 1
//   N_t ~ N(0, (1 - rho^2) * sigma_t^2), independent of X_{t-1}
//
// so Var(X_t) = sigma_t^2 for every t and Cov(X_t, X_s) scales as
// rho^|t-s|. Frame indices are 0-based throughout the library.
struct SourceParams {
  int num_frames = 0;             // M
  int num_pixels = 0;             // n
  double rho = 0.0;               // temporal correlation, |rho| <= 1
  std::vector<double> variances;  // sigma_t^2 per frame, all > 0

  static SourceParams constant_variance(int num_frames, int num_pixels,
                                        double rho, double sigma2);

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

// M x n matrix of pixel values, frame-major storage. Carries a copy of the
// generating model so consumers can check dimensional consistency.
struct FrameMatrix {
  SourceParams params;
  std::vector<double> values;  // num_frames * num_pixels

  double operator()(int frame, int pixel) const {
    return values[static_cast<std::size_t>(frame) * params.num_pixels + pixel];
  }
  double& operator()(int frame, int pixel) {
    return values[static_cast<std::size_t>(frame) * params.num_pixels + pixel];
  }
  std::span<const double> frame(int t) const {
    return {values.data() + static_cast<std::size_t>(t) * params.num_pixels,
            static_cast<std::size_t>(params.num_pixels)};
  }
  std::span<double> frame(int t) {
    return {values.data() + static_cast<std::size_t>(t) * params.num_pixels,
            static_cast<std::size_t>(params.num_pixels)};
  }
};

FrameMatrix make_frame_matrix(const SourceParams& params);

// Draws one GOP realization. Bit-reproducible for a fixed (params, seed);
// frame t consumes substream (seed, gop_noise, t).
FrameMatrix sample_gop(const SourceParams& params, std::uint64_t seed);

// Per-frame MSE: d_t = (1/n) sum_i (x_t(i) - xhat_t(i))^2.
std::vector<double> empirical_distortion(const FrameMatrix& x,
                                         const FrameMatrix& xhat);

// Model covariance of a pixel between frames t and s (0-based):
// rho^|t-s| * sigma_t * sigma_s.
double model_covariance(const SourceParams& params, int t, int s);

// One-step prediction gain rho * sigma_t / sigma_{t-1} for frame t >= 1.
double prediction_gain(const SourceParams& params, int t);

}  // namespace gmrdr
