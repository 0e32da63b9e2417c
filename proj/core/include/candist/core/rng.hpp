#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace candist {

/// Seeded 64-bit Mersenne Twister with the handful of draws the engine
/// needs. Independent streams are derived with `fork` so that adding
/// draws to one consumer never perturbs another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream keyed by (seed, name, index); stable across runs.
  static Rng stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal(double mean = 0.0, double stddev = 1.0) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }
  /// Beta(a, b) via the ratio of two gamma variates.
  double beta(double a, double b);
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }
  std::vector<std::size_t> permutation(std::size_t n);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Per-epoch visiting order shared by every trainer that must replay the
/// same batches.
std::vector<std::size_t> epoch_order(std::uint64_t seed, std::size_t epoch, std::size_t n);

}  // namespace candist
