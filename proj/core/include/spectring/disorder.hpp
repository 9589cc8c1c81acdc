#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "spectring/eigensolver.hpp"
#include "spectring/rng.hpp"
#include "spectring/string.hpp"
#include "spectring/subordinator.hpp"

namespace spectring {

// Discrete and limit speed measures of the subordinator-coupled trap and
// barrier walks, plus the annealed counting estimators built on them.

// Trap string at lattice size n: atoms at k/n with weights
// V((k+1)/n) - V(k/n) on [0, 1]; zero increments are dropped. The path
// horizon should reach 1 + 1/n (values beyond the horizon clamp).
KreinString trap_string(const SubordinatorPath& path, std::size_t n);

// Barrier string at lattice size n: atoms at V(k/n), k = 1..n+1, each of
// weight 1/n, on [0, V((n+1)/n)]; coincident positions merge.
KreinString barrier_string(const SubordinatorPath& path, std::size_t n);

// Limit of the trap family: the jumps of V inside (0, 1) on [0, 1].
// Throws DegenerateInput when V has no jump there.
KreinString limit_trap_string(const SubordinatorPath& path);

// Limit of the barrier family: the generalized inverse of V restricted
// to (0, 1), on [0, V(1)].
KreinString limit_barrier_string(const SubordinatorPath& path);

struct CountingCurve {
  std::vector<double> x_grid;
  std::vector<double> mean;    // Monte Carlo estimate of E N_D(x)
  std::vector<double> stderr_; // standard error per point
  std::size_t samples = 0;
  std::size_t resampled_paths = 0; // degenerate paths drawn again
  std::size_t capped_paths = 0;    // paths clipped to n_atoms_cap
  double slope = 0.0;              // log-log fit over the upper half grid
  double slope_halfwidth = 0.0;    // 1.96 * OLS standard error
  double expected_slope = 0.0;     // alpha / (1 + alpha)
};

enum class DisorderModel { trap, barrier };

struct AnnealedConfig {
  double alpha = 0.5;
  std::vector<double> x_grid;
  std::size_t samples = 200;
  std::size_t n_atoms_cap = 100000;
  double epsilon = 1e-5;
  std::uint64_t seed = 0;
  CompensationMode mode = CompensationMode::truncate;
  DisorderModel model = DisorderModel::trap;
  std::size_t workers = 1;
};

// Monte Carlo estimate of x -> E N_D(x) on the limit string of i.i.d.
// paths, with the log-log slope fitted over the upper half of the grid.
// Results are independent of the worker count.
CountingCurve annealed_counting(const AnnealedConfig& cfg);

// Coupling tau_n(k/n) = G^{-1}(n^{1/alpha} Delta_n V(k/n)) realized
// through empirical quantiles of V(1): G matches the survival functions
// of V(1) and tau. PureStable composes with the identity and reproduces
// n^{1/alpha} Delta_n V exactly.
//
// Truncation caveat: the n^{1/alpha}-scaled increments of a path with
// cutoff eps follow the V(1) law truncated at n^{1/alpha} eps. For the
// transformed marginals to match a quantile table, sample the paths at
// cutoff (table cutoff) / n^{1/alpha}.
struct PureStableCoupling {};

struct EmpiricalCoupling {
  // Survival quantile of tau: s in (0,1) -> inf{ t : P(tau > t) <= s }.
  std::function<double(double)> tau_survival_quantile;
  std::vector<double> v1_samples_sorted; // empirical V(1) sample, sorted
};

struct CouplingResult {
  std::vector<double> tau; // tau_n(k/n), k = 0..n
  std::size_t clamped = 0; // increments outside the table range
};

CouplingResult general_coupling(const SubordinatorPath& path, std::size_t n,
                                const PureStableCoupling& coupling);
CouplingResult general_coupling(const SubordinatorPath& path, std::size_t n,
                                const EmpiricalCoupling& coupling);

// Diffusive normalization check: eigenvalues of the trap rates
// tau(x)^(-1+a) tau(y)^a (or barrier rates tau(max(x,y))^{-1}) at lattice
// size n, rescaled to the pi^2 k^2 limit. The trap rescaling is
// n^2 E(tau^{-a})^2 E(tau): the square enters because the scale function
// sums tau(x-1)^{-a} tau(x)^{-a} over independent neighbors. At a = 0
// it reduces to the plain n^2 E(tau) normalization.
struct DiffusiveRow {
  std::size_t k = 0;
  double lambda = 0.0;   // raw eigenvalue
  double rescaled = 0.0; // n^2 * moments * lambda
  double limit = 0.0;    // pi^2 k^2
};

struct DiffusiveConfig {
  DisorderModel model = DisorderModel::trap;
  double a = 0.0; // trap only; barrier ignores it
  std::size_t n = 4096;
  std::size_t k_max = 3;
  std::uint64_t seed = 0;
  // Population moments; supplied analytically when known.
  double mean_tau = 1.0;
  double mean_tau_neg_a = 1.0;
};

std::vector<DiffusiveRow>
diffusive_check(const std::function<double(Rng&)>& tau_sampler,
                const DiffusiveConfig& cfg);

} // namespace spectring
