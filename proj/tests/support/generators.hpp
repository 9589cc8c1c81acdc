#pragma once

#include <algorithm>
#include <vector>

#include "spectring/rng.hpp"
#include "spectring/string.hpp"
#include "spectring/walk.hpp"

namespace spectring::testing {

// Random-string generators, fixed so failures reproduce by seed.
//
// bracketing_string: the documented property-test family for the
// counting inequalities: atom count uniform in [1, 50], positions sorted
// uniforms in (0, 1), weights log-uniform in [1e-2, 1e2].
//
// solver_string: the family for the solver cross-validation at 1e-9
// tolerances: atom count uniform in [1, 200], positions drawn without
// replacement from a grid of 5000 cells (gaps >= 2e-4, so conditioning
// stays inside what double precision supports), weights log-uniform in
// [1e-1, 1e1]. No boundary atoms in either family.

inline KreinString random_string(Rng& rng, std::size_t min_atoms,
                                 std::size_t max_atoms, double w_lo,
                                 double w_hi, std::size_t grid = 0) {
  const std::size_t count =
      static_cast<std::size_t>(rng.integer(min_atoms, max_atoms));
  std::vector<double> pos(count);
  if (grid == 0) {
    for (double& p : pos)
      p = rng.uniform(0.0, 1.0);
    std::sort(pos.begin(), pos.end());
    // uniform draws essentially never coincide; nudge if they do
    for (std::size_t i = 1; i < pos.size(); ++i)
      if (pos[i] <= pos[i - 1])
        pos[i] = std::nextafter(pos[i - 1], 1.0);
  } else {
    std::vector<std::uint64_t> cells;
    while (cells.size() < count) {
      const std::uint64_t c = rng.integer(1, grid - 1);
      if (std::find(cells.begin(), cells.end(), c) == cells.end())
        cells.push_back(c);
    }
    std::sort(cells.begin(), cells.end());
    for (std::size_t i = 0; i < count; ++i)
      pos[i] = static_cast<double>(cells[i]) / static_cast<double>(grid);
  }
  std::vector<Atom> atoms;
  atoms.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    atoms.push_back(Atom{pos[i], rng.log_uniform(w_lo, w_hi)});
  return KreinString(0.0, 1.0, std::move(atoms));
}

inline KreinString bracketing_string(Rng& rng) {
  return random_string(rng, 1, 50, 1e-2, 1e2);
}

inline KreinString solver_string(Rng& rng) {
  return random_string(rng, 1, 200, 1e-1, 1e1, 5000);
}

// Cuts strictly between atoms (and away from the endpoints), so the
// partition hypotheses hold by construction.
inline std::vector<double> random_cuts(Rng& rng, const KreinString& s,
                                       std::size_t max_cuts) {
  std::vector<double> cuts;
  const std::size_t want = static_cast<std::size_t>(rng.integer(1, max_cuts));
  for (std::size_t i = 0; i < want; ++i) {
    const double c = rng.uniform(s.left(), s.right());
    bool collides = c <= s.left() || c >= s.right();
    for (const Atom& a : s.atoms())
      collides = collides || a.position == c;
    if (!collides)
      cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

inline RateField random_rate_field(Rng& rng, std::size_t n_lo,
                                   std::size_t n_hi, double rate_lo,
                                   double rate_hi) {
  const std::size_t n = static_cast<std::size_t>(rng.integer(n_lo, n_hi));
  std::vector<double> left(n), right(n);
  for (double& v : left)
    v = rng.log_uniform(rate_lo, rate_hi);
  for (double& v : right)
    v = rng.log_uniform(rate_lo, rate_hi);
  return RateField(n, 1.0, std::move(left), std::move(right));
}

} // namespace spectring::testing
