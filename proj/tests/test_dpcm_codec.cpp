#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "gmrdr/dpcm_codec.hpp"
#include "gmrdr/rng.hpp"
#include "test_support.hpp"

using gmrdr::DistortionTuple;
using gmrdr::FrameMatrix;
using gmrdr::SourceParams;
using gmrdr_test::correlation;

namespace {

std::vector<double> gaussian_vector(int n, double sd, std::uint64_t seed) {
  gmrdr::NormalSampler ns(seed);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) {
    x = sd * ns();
  }
  return v;
}

}  // namespace

TEST_CASE("test channel rejects invalid variances") {
  const std::vector<double> w = {1.0, -2.0};
  CHECK_THROWS_AS(gmrdr::test_channel_sample(w, 1.0, 1.5, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gmrdr::test_channel_sample(w, 0.0, 0.1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gmrdr::test_channel_sample(w, 1.0, 0.0, 0),
                  std::invalid_argument);
}

TEST_CASE("zero-information description is exactly zero") {
  const std::vector<double> w = gaussian_vector(128, 1.0, 1);
  const std::vector<double> what = gmrdr::test_channel_sample(w, 1.0, 1.0, 2);
  for (double x : what) {
    CHECK(x == 0.0);
  }
}

TEST_CASE("near-zero distortion reproduces the residual") {
  const std::vector<double> w = gaussian_vector(4096, 1.0, 3);
  const double d = 1e-12;
  const std::vector<double> what = gmrdr::test_channel_sample(w, 1.0, d, 4);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(std::abs(what[i] - w[i]) <= 1e-5);
  }
}

TEST_CASE("test channel moments at a million samples") {
  const int n = 1000000;
  const double sigma2_w = 1.0;
  const double d = 0.25;
  const std::vector<double> w = gaussian_vector(n, 1.0, 5);
  const std::vector<double> what = gmrdr::test_channel_sample(w, sigma2_w, d, 6);

  double sum_what2 = 0.0;
  double sum_err2 = 0.0;
  std::vector<double> err(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = static_cast<std::size_t>(i);
    err[s] = w[s] - what[s];
    sum_what2 += what[s] * what[s];
    sum_err2 += err[s] * err[s];
  }
  const double var_what = sum_what2 / n;
  const double mse = sum_err2 / n;
  CHECK(std::abs(var_what - 0.75) <= 4.0 * 0.75 * std::sqrt(2.0 / n));
  CHECK(std::abs(mse - 0.25) <= 4.0 * 0.25 * std::sqrt(2.0 / n));
  CHECK(std::abs(correlation(what, err)) <= 4.0 / std::sqrt(n));
}

TEST_CASE("single-frame codec attains the target distortion") {
  const int n = 1 << 20;
  const SourceParams p = SourceParams::constant_variance(1, n, 0.0, 1.0);
  const DistortionTuple d = DistortionTuple::common(0.25, 1);
  const FrameMatrix x = gmrdr::sample_gop(p, 100);
  const auto trace = gmrdr::encode_decode_gop(x, p, d, 101);
  const auto mse = gmrdr::empirical_distortion(x, trace.reconstructions);
  CHECK(std::abs(mse[0] - 0.25) <= 4.0 * 0.25 * std::sqrt(2.0 / n));
  CHECK(trace.report.sum_rate_bits == 1.0);
}

TEST_CASE("five-frame chain attains the common target per frame") {
  const int n = 1 << 18;
  const SourceParams p = SourceParams::constant_variance(5, n, 0.9, 1.0);
  const DistortionTuple d = DistortionTuple::common(0.1, 5);
  const FrameMatrix x = gmrdr::sample_gop(p, 200);
  const auto trace = gmrdr::encode_decode_gop(x, p, d, 201);
  const auto mse = gmrdr::empirical_distortion(x, trace.reconstructions);
  const double gate = 4.0 * 0.1 * std::sqrt(2.0 / n);
  for (int t = 0; t < 5; ++t) {
    CHECK(std::abs(mse[static_cast<std::size_t>(t)] - 0.1) <= gate);
  }
}

TEST_CASE("residuals match the schedule and descriptions are orthogonal") {
  const int n = 1 << 18;
  const SourceParams p = SourceParams::constant_variance(4, n, 0.9, 1.0);
  const DistortionTuple d = DistortionTuple::common(0.1, 4);
  const FrameMatrix x = gmrdr::sample_gop(p, 300);
  const auto trace = gmrdr::encode_decode_gop(x, p, d, 301);

  for (int t = 0; t < 4; ++t) {
    std::vector<double> residual(static_cast<std::size_t>(n));
    std::vector<double> what(static_cast<std::size_t>(n));
    std::vector<double> err(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double pred =
          t == 0 ? 0.0
                 : gmrdr::prediction_gain(p, t) * trace.reconstructions(t - 1, i);
      residual[static_cast<std::size_t>(i)] = x(t, i) - pred;
      what[static_cast<std::size_t>(i)] = trace.reconstructions(t, i) - pred;
      err[static_cast<std::size_t>(i)] =
          residual[static_cast<std::size_t>(i)] - what[static_cast<std::size_t>(i)];
    }
    double ss = 0.0;
    for (double r : residual) {
      ss += r * r;
    }
    const double s2w = trace.residual_variances_used[static_cast<std::size_t>(t)];
    CHECK(std::abs(ss / n - s2w) <= 4.0 * s2w * std::sqrt(2.0 / n));
    CHECK(std::abs(correlation(what, err)) <= 4.0 / std::sqrt(n));
  }
}

TEST_CASE("zero-rate frames keep the prediction bit-exactly") {
  const int n = 1 << 16;
  const SourceParams p = SourceParams::constant_variance(3, n, 0.9, 1.0);
  DistortionTuple d;
  d.targets = {0.1, 0.5, 0.1};  // frame 2 clips at sigma2_W = 0.271
  const FrameMatrix x = gmrdr::sample_gop(p, 400);
  const auto trace = gmrdr::encode_decode_gop(x, p, d, 401);

  CHECK(trace.report.rates_bits[1] == 0.0);
  CHECK(trace.report.effective_distortions[1] ==
        trace.residual_variances_used[1]);
  const double gain = gmrdr::prediction_gain(p, 1);
  for (int i = 0; i < n; ++i) {
    CHECK(trace.reconstructions(1, i) == gain * trace.reconstructions(0, i));
  }
  const auto mse = gmrdr::empirical_distortion(x, trace.reconstructions);
  CHECK(std::abs(mse[1] - 0.271) <= 4.0 * 0.271 * std::sqrt(2.0 / n));
  // Downstream schedule consumes the achieved value.
  CHECK(gmrdr_test::rel_err(trace.residual_variances_used[2], 0.40951) <= 1e-12);
}

TEST_CASE("codec trace is deterministic and matches the analytics") {
  const SourceParams p = SourceParams::constant_variance(3, 128, 0.8, 2.0);
  const DistortionTuple d = DistortionTuple::common(0.3, 3);
  const FrameMatrix x = gmrdr::sample_gop(p, 7);
  const auto a = gmrdr::encode_decode_gop(x, p, d, 77);
  const auto b = gmrdr::encode_decode_gop(x, p, d, 77);
  CHECK(a.reconstructions.values == b.reconstructions.values);

  const auto report = gmrdr::sum_rate(p, d);
  CHECK(a.report.sum_rate_bits == report.sum_rate_bits);
  CHECK(a.report.rates_bits == report.rates_bits);
  DistortionTuple scheduled = d;
  CHECK(a.residual_variances_used == gmrdr::innovation_schedule(p, scheduled));
}

TEST_CASE("codec rejects mismatched dimensions") {
  const SourceParams p = SourceParams::constant_variance(2, 16, 0.5, 1.0);
  const SourceParams q = SourceParams::constant_variance(2, 8, 0.5, 1.0);
  const FrameMatrix x = gmrdr::sample_gop(q, 1);
  CHECK_THROWS_AS(
      gmrdr::encode_decode_gop(x, p, DistortionTuple::common(0.1, 2), 0),
      std::invalid_argument);
}
