#include "spectring/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectring/error.hpp"
#include "spectring/rng.hpp"

namespace spectring {

double SubordinatorPath::levy_constant(double alpha) {
  return alpha / std::tgamma(1.0 - alpha);
}

double SubordinatorPath::compensation_mass_per_unit() const {
  return levy_constant(alpha) * std::pow(epsilon, 1.0 - alpha) /
         (1.0 - alpha);
}

void SubordinatorPath::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
  if (!(horizon > 0.0))
    throw DomainError("horizon must be positive");
  if (!(epsilon > 0.0))
    throw DomainError("truncation cutoff must be positive");
  double prev = 0.0;
  for (const Atom& j : jumps) {
    if (!(j.position > prev) || j.position > horizon)
      throw DomainError("jump positions must be strictly increasing in "
                        "(0, T]");
    if (!(j.weight >= epsilon))
      throw DomainError("jump sizes must be >= the cutoff");
    prev = j.position;
  }
}

std::vector<Atom> SubordinatorPath::merged_jumps() const {
  if (mode == CompensationMode::truncate)
    return jumps;
  // Micro-atoms carrying the truncated small-jump mass, 1000 grid points
  // per unit length.
  const std::size_t grid =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::llround(1000.0 * horizon)));
  const double w_micro = compensation_mass_per_unit() * horizon /
                         static_cast<double>(grid);
  std::vector<Atom> merged;
  merged.reserve(jumps.size() + grid);
  std::size_t g = 0;
  std::size_t i = 0;
  while (g < grid || i < jumps.size()) {
    const double gpos = g < grid ? (static_cast<double>(g) + 0.5) * horizon /
                                       static_cast<double>(grid)
                                 : std::numeric_limits<double>::infinity();
    const double jpos = i < jumps.size()
                            ? jumps[i].position
                            : std::numeric_limits<double>::infinity();
    if (gpos < jpos) {
      merged.push_back(Atom{gpos, w_micro});
      ++g;
    } else if (jpos < gpos) {
      merged.push_back(jumps[i]);
      ++i;
    } else {
      merged.push_back(Atom{jpos, jumps[i].weight + w_micro});
      ++i;
      ++g;
    }
  }
  return merged;
}

double SubordinatorPath::value(double t) const {
  double sum = 0.0;
  if (mode == CompensationMode::truncate) {
    for (const Atom& j : jumps) {
      if (j.position > t)
        break;
      sum += j.weight;
    }
    return sum;
  }
  for (const Atom& j : merged_jumps()) {
    if (j.position > t)
      break;
    sum += j.weight;
  }
  return sum;
}

SubordinatorPath sample_subordinator(double alpha, double horizon,
                                     double epsilon, std::uint64_t seed,
                                     CompensationMode mode) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1), got " +
                      std::to_string(alpha));
  if (!(horizon > 0.0) || !(epsilon > 0.0))
    throw DomainError("horizon and cutoff must be positive");

  SubordinatorPath path;
  path.alpha = alpha;
  path.horizon = horizon;
  path.epsilon = epsilon;
  path.mode = mode;
  path.seed = seed;

  // Jumps of size >= eps form a Poisson process with rate
  // c eps^{-alpha} / alpha per unit length; sizes are Pareto(alpha) on
  // [eps, inf), positions uniform.
  const double c = SubordinatorPath::levy_constant(alpha);
  const double rate = c * std::pow(epsilon, -alpha) / alpha;
  Rng rng(seed);
  const std::uint64_t count = rng.poisson(rate * horizon);
  std::vector<Atom> jumps;
  jumps.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double u = horizon * (1.0 - rng.uniform01()); // (0, T]
    const double w = rng.pareto(alpha, epsilon);
    jumps.push_back(Atom{u, w});
  }
  std::sort(jumps.begin(), jumps.end(),
            [](const Atom& a, const Atom& b) { return a.position < b.position; });
  // Coincident positions (null event) merge to keep positions strict.
  std::vector<Atom> dedup;
  dedup.reserve(jumps.size());
  for (const Atom& j : jumps) {
    if (!dedup.empty() && dedup.back().position == j.position)
      dedup.back().weight += j.weight;
    else
      dedup.push_back(j);
  }
  path.jumps = std::move(dedup);
  return path;
}

} // namespace spectring
