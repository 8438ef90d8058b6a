#pragma once

#include <cstdint>
#include <random>

namespace gmrdr {

// Substream tags. One user-visible 64-bit seed is split into independent
// streams per (tag, index) so trials, frames and channel draws can run in
// any order with identical results. Tag values are fixed: they are part of
// the reproducibility contract.
enum class Stream : std::uint64_t {
  gop_noise = 1,
  test_channel = 2,
  trial_source = 3,
  trial_codec = 4,
  trial_pattern = 5,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of substream (stream, index) derived from a base seed. Each field is
// mixed before the next is folded in, so structured inputs do not alias.
constexpr std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                    std::uint64_t index = 0) {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ static_cast<std::uint64_t>(stream));
  h = mix64(h ^ index);
  return h;
}

// Standard-normal draws from a seeded engine, deterministic in call order.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double operator()() { return dist_(gen_); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace gmrdr
