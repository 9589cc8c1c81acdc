#pragma once

#include <cstdint>
#include <vector>

#include "spectring/string.hpp"

namespace spectring {

enum class CompensationMode { truncate, grid_compensate };

// Truncated realization of the alpha-stable subordinator V: jumps form a
// Poisson point process on (0, T] x [eps, inf) with intensity
// c w^{-1-alpha} du dw, c = alpha / Gamma(1 - alpha). That normalization
// makes E exp(-lambda V(t)) = exp(-lambda^alpha t) up to the truncation
// bias, which is at most lambda c eps^{1-alpha} / (1 - alpha) per unit
// length. In grid-compensate mode the missing small-jump mass is added
// back as uniform micro-atoms on a grid of 1000 points per unit length.
struct SubordinatorPath {
  double alpha = 0.5;
  double horizon = 1.0; // T
  double epsilon = 1e-6;
  CompensationMode mode = CompensationMode::truncate;
  std::uint64_t seed = 0;
  std::vector<Atom> jumps; // Poisson jumps, sizes >= epsilon, sorted

  // Jumps merged with compensation micro-atoms (equal to `jumps` in
  // truncate mode). Sorted, coincident positions merged.
  std::vector<Atom> merged_jumps() const;

  // V(t): sum of merged jump sizes at positions <= t, clamped at T.
  double value(double t) const;

  void validate() const;

  static double levy_constant(double alpha); // alpha / Gamma(1 - alpha)
  // Truncated-tail mass per unit length, c eps^{1-alpha} / (1-alpha).
  double compensation_mass_per_unit() const;
};

SubordinatorPath sample_subordinator(double alpha, double horizon,
                                     double epsilon, std::uint64_t seed,
                                     CompensationMode mode =
                                         CompensationMode::truncate);

} // namespace spectring
