#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spectring {

// The project-wide random generator: std::mt19937_64 behind a thin
// wrapper. Reproducibility contract: identical (seed) or
// (seed, substream index) gives identical draws within one build.
// Cross-library or cross-language bit-exactness is not promised.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream for Monte Carlo worker k. Derivation is a
  // splitmix64 scramble of (seed, k), so path results do not depend on
  // worker count or scheduling.
  static Rng substream(std::uint64_t seed, std::uint64_t k) {
    return Rng(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (k + 1)));
  }

  double uniform01() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(engine_);
  }

  // log-uniform on [a, b], a > 0
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  double exponential(double mean = 1.0) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }

  std::uint64_t poisson(double mean) {
    return static_cast<std::uint64_t>(
        std::poisson_distribution<long long>(mean)(engine_));
  }

  // Pareto on [floor, inf) with survival (w/floor)^(-alpha).
  double pareto(double alpha, double floor) {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return floor * std::pow(u, -1.0 / alpha);
  }

  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

private:
  std::mt19937_64 engine_;
};

} // namespace spectring
