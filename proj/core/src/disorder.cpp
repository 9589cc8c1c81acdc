#include "spectring/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include "spectring/error.hpp"
#include "spectring/walk.hpp"

namespace spectring {

namespace {

std::uint64_t path_seed(std::uint64_t seed, std::size_t index,
                        std::size_t attempt) {
  return Rng::splitmix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1)) +
         attempt;
}

// Keep the n_atoms_cap largest jumps (position order restored).
std::size_t cap_jumps(std::vector<Atom>& jumps, std::size_t cap) {
  if (jumps.size() <= cap)
    return 0;
  const std::size_t dropped = jumps.size() - cap;
  std::sort(jumps.begin(), jumps.end(),
            [](const Atom& a, const Atom& b) { return a.weight > b.weight; });
  jumps.resize(cap);
  std::sort(jumps.begin(), jumps.end(), [](const Atom& a, const Atom& b) {
    return a.position < b.position;
  });
  return dropped;
}

} // namespace

KreinString trap_string(const SubordinatorPath& path, std::size_t n) {
  if (n < 2)
    throw DomainError("trap_string needs n >= 2");
  // Weight at k/n is V((k+1)/n) - V(k/n): bucket the jumps with
  // u in (k/n, (k+1)/n], k = 0..n.
  std::vector<double> inc(n + 1, 0.0);
  const double dn = static_cast<double>(n);
  for (const Atom& j : path.merged_jumps()) {
    const double cell = std::ceil(j.position * dn) - 1.0;
    if (cell < 0.0 || cell > dn)
      continue;
    inc[static_cast<std::size_t>(cell)] += j.weight;
  }
  std::vector<Atom> atoms;
  atoms.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    if (inc[k] > 0.0)
      atoms.push_back(Atom{static_cast<double>(k) / dn, inc[k]});
  if (atoms.empty())
    throw DegenerateInput("trap_string: path has no jumps in (0, 1 + 1/n]");
  return KreinString(0.0, 1.0, std::move(atoms));
}

KreinString barrier_string(const SubordinatorPath& path, std::size_t n) {
  if (n < 2)
    throw DomainError("barrier_string needs n >= 2");
  const double dn = static_cast<double>(n);
  const std::vector<Atom> jumps = path.merged_jumps();

  // V(k/n) for k = 1..n+1 by a single sweep; coincident values merge.
  std::vector<Atom> atoms;
  double v = 0.0;
  std::size_t i = 0;
  for (std::size_t k = 1; k <= n + 1; ++k) {
    const double t = static_cast<double>(k) / dn;
    while (i < jumps.size() && jumps[i].position <= t)
      v += jumps[i++].weight;
    if (!atoms.empty() && atoms.back().position == v)
      atoms.back().weight += 1.0 / dn;
    else
      atoms.push_back(Atom{v, 1.0 / dn});
  }
  const double ell = atoms.back().position;
  if (!(ell > 0.0))
    throw DegenerateInput("barrier_string: path has no jumps in the window");
  return KreinString(0.0, ell, std::move(atoms));
}

KreinString limit_trap_string(const SubordinatorPath& path) {
  std::vector<Atom> atoms;
  for (const Atom& j : path.merged_jumps())
    if (j.position > 0.0 && j.position < 1.0)
      atoms.push_back(j);
  if (atoms.empty())
    throw DegenerateInput("limit_trap_string: no jumps inside (0, 1)");
  return KreinString(0.0, 1.0, std::move(atoms));
}

KreinString limit_barrier_string(const SubordinatorPath& path) {
  StepFunction m;
  m.horizon = 1.0;
  for (const Atom& j : path.merged_jumps())
    if (j.position > 0.0 && j.position < 1.0)
      m.jumps.push_back(j);
  if (m.jumps.empty())
    throw DegenerateInput("limit_barrier_string: no jumps inside (0, 1)");
  return generalized_inverse(m);
}

CountingCurve annealed_counting(const AnnealedConfig& cfg) {
  if (cfg.samples < 30)
    throw DomainError("annealed_counting needs at least 30 samples");
  if (cfg.x_grid.size() < 2)
    throw DomainError("annealed_counting needs an x grid");
  for (std::size_t i = 1; i < cfg.x_grid.size(); ++i)
    if (!(cfg.x_grid[i] > cfg.x_grid[i - 1]))
      throw DomainError("x grid must be strictly increasing");

  const std::size_t grid = cfg.x_grid.size();
  std::vector<std::vector<std::size_t>> counts(
      cfg.samples, std::vector<std::size_t>(grid, 0));
  std::vector<std::size_t> resamples(cfg.samples, 0);
  std::vector<std::size_t> capped(cfg.samples, 0);

  auto run_path = [&](std::size_t i) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt > 1000)
        throw NumericFailure("annealed_counting: path " + std::to_string(i) +
                                 " kept degenerating",
                             i);
      SubordinatorPath path = sample_subordinator(
          cfg.alpha, 1.0, cfg.epsilon, path_seed(cfg.seed, i, attempt),
          cfg.mode);
      capped[i] += cap_jumps(path.jumps, cfg.n_atoms_cap) > 0 ? 1 : 0;
      try {
        const KreinString s = cfg.model == DisorderModel::trap
                                  ? limit_trap_string(path)
                                  : limit_barrier_string(path);
        const Pencil p = assemble_pencil(s, BoundaryCondition::dirichlet);
        for (std::size_t g = 0; g < grid; ++g)
          counts[i][g] = count_leq(p, cfg.x_grid[g]);
        return;
      } catch (const DegenerateInput&) {
        ++resamples[i];
      }
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, cfg.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < cfg.samples; ++i)
      run_path(i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < cfg.samples; i += workers)
            run_path(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool)
      t.join();
    for (const std::exception_ptr& e : errors)
      if (e)
        std::rethrow_exception(e);
  }

  CountingCurve curve;
  curve.x_grid = cfg.x_grid;
  curve.samples = cfg.samples;
  curve.mean.resize(grid);
  curve.stderr_.resize(grid);
  curve.resampled_paths =
      std::accumulate(resamples.begin(), resamples.end(), std::size_t{0});
  curve.capped_paths =
      std::accumulate(capped.begin(), capped.end(), std::size_t{0});
  for (std::size_t g = 0; g < grid; ++g) {
    double mean = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i)
      mean += static_cast<double>(counts[i][g]);
    mean /= static_cast<double>(cfg.samples);
    double var = 0.0;
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      const double d = static_cast<double>(counts[i][g]) - mean;
      var += d * d;
    }
    var /= static_cast<double>(cfg.samples - 1);
    curve.mean[g] = mean;
    curve.stderr_[g] = std::sqrt(var / static_cast<double>(cfg.samples));
  }

  // Log-log slope over the upper half of the grid; small-x transients
  // stay out of the fit.
  const std::size_t lo = grid / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (std::size_t g = lo; g < grid; ++g) {
    if (!(curve.mean[g] > 0.0))
      continue;
    const double lx = std::log(curve.x_grid[g]);
    const double ly = std::log(curve.mean[g]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  curve.expected_slope = cfg.alpha / (1.0 + cfg.alpha);
  if (m >= 2) {
    const double dm = static_cast<double>(m);
    const double sxx_c = sxx - sx * sx / dm;
    curve.slope = (sxy - sx * sy / dm) / sxx_c;
    double ss_res = 0.0;
    const double intercept = (sy - curve.slope * sx) / dm;
    for (std::size_t g = lo; g < grid; ++g) {
      if (!(curve.mean[g] > 0.0))
        continue;
      const double r = std::log(curve.mean[g]) - intercept -
                       curve.slope * std::log(curve.x_grid[g]);
      ss_res += r * r;
    }
    if (m > 2)
      curve.slope_halfwidth =
          1.96 * std::sqrt(ss_res / (dm - 2.0) / sxx_c);
  }
  return curve;
}

CouplingResult general_coupling(const SubordinatorPath& path, std::size_t n,
                                const PureStableCoupling&) {
  if (n < 2)
    throw DomainError("general_coupling needs n >= 2");
  CouplingResult out;
  out.tau.resize(n + 1);
  const double dn = static_cast<double>(n);
  const double scale = std::pow(dn, 1.0 / path.alpha);
  std::vector<double> inc(n + 1, 0.0);
  for (const Atom& j : path.merged_jumps()) {
    const double cell = std::ceil(j.position * dn) - 1.0;
    if (cell < 0.0 || cell > dn)
      continue;
    inc[static_cast<std::size_t>(cell)] += j.weight;
  }
  for (std::size_t k = 0; k <= n; ++k)
    out.tau[k] = scale * inc[k];
  return out;
}

CouplingResult general_coupling(const SubordinatorPath& path, std::size_t n,
                                const EmpiricalCoupling& coupling) {
  if (n < 2)
    throw DomainError("general_coupling needs n >= 2");
  if (coupling.v1_samples_sorted.empty() || !coupling.tau_survival_quantile)
    throw DomainError("empirical coupling needs a quantile table and a tau "
                      "survival quantile");
  const auto& table = coupling.v1_samples_sorted;
  const double m1 = static_cast<double>(table.size() + 1);

  CouplingResult pure = general_coupling(path, n, PureStableCoupling{});
  CouplingResult out;
  out.tau.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = pure.tau[k];
    const std::size_t rank = static_cast<std::size_t>(
        std::upper_bound(table.begin(), table.end(), t) - table.begin());
    if (rank == 0 || rank == table.size())
      ++out.clamped;
    const double p = static_cast<double>(rank) / m1; // ecdf, rank/(M+1)
    out.tau[k] = coupling.tau_survival_quantile(1.0 - p);
  }
  return out;
}

std::vector<DiffusiveRow>
diffusive_check(const std::function<double(Rng&)>& tau_sampler,
                const DiffusiveConfig& cfg) {
  if (cfg.n < 2)
    throw DomainError("diffusive_check needs n >= 2");
  Rng rng(cfg.seed);
  RateField rates = [&] {
    if (cfg.model == DisorderModel::trap) {
      std::vector<double> tau(cfg.n + 1);
      for (double& t : tau)
        t = tau_sampler(rng);
      return RateField::trap_asymmetric(tau, cfg.a);
    }
    std::vector<double> tau(cfg.n);
    for (double& t : tau)
      t = tau_sampler(rng);
    return RateField::barrier(tau);
  }();

  const ScaleSpeedPair pair = decompose_rates(rates, 1.0);
  const KreinString s = build_string(pair);
  const Spectrum spec =
      eigenvalues(s, BoundaryCondition::dirichlet, cfg.k_max);

  const double n2 = static_cast<double>(cfg.n) * static_cast<double>(cfg.n);
  // Trap normalization carries E(tau^-a) squared: the scale function
  // averages tau(x-1)^-a tau(x)^-a over independent neighbors.
  const double moments =
      cfg.model == DisorderModel::trap
          ? cfg.mean_tau * cfg.mean_tau_neg_a * cfg.mean_tau_neg_a
          : cfg.mean_tau;
  std::vector<DiffusiveRow> rows;
  for (std::size_t k = 0; k < spec.eigenvalues.size(); ++k) {
    DiffusiveRow row;
    row.k = k + 1;
    row.lambda = spec.eigenvalues[k];
    row.rescaled = n2 * moments * row.lambda;
    const double pk = M_PI * static_cast<double>(k + 1);
    row.limit = pk * pk;
    rows.push_back(row);
  }
  return rows;
}

} // namespace spectring
