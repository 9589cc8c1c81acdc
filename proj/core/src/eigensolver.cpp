#include "spectring/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectring/error.hpp"
#include "spectring/rng.hpp"

namespace spectring {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Standard-form tridiagonal J = M^{-1/2} K M^{-1/2}: same inertia as the
// pencil K - x M at every shift, and tridiagonality survives.
struct StandardForm {
  std::vector<double> diag;
  std::vector<double> off;  // size dim-1
  std::vector<double> off2; // squared off-diagonals
  double pivmin = 0.0;

  std::size_t dim() const { return diag.size(); }
};

StandardForm to_standard(const Pencil& p) {
  StandardForm j;
  const std::size_t n = p.dim();
  j.diag.resize(n);
  j.off.assign(n > 0 ? n - 1 : 0, 0.0);
  j.off2.assign(n > 0 ? n - 1 : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    j.diag[i] = p.k_diag[i] / p.m_diag[i];
  double max_off2 = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    j.off[i] = p.k_off[i] / std::sqrt(p.m_diag[i] * p.m_diag[i + 1]);
    j.off2[i] = j.off[i] * j.off[i];
    max_off2 = std::max(max_off2, j.off2[i]);
  }
  const double safemin = std::numeric_limits<double>::min();
  j.pivmin = std::max(safemin, safemin * max_off2);
  return j;
}

// Number of eigenvalues of J that are <= x. Closed counting: a zero
// pivot is replaced by -pivmin, so an eigenvalue exactly at x counts.
std::size_t sturm_count(const StandardForm& j, double x) {
  std::size_t count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < j.dim(); ++i) {
    const double b2 = i == 0 ? 0.0 : j.off2[i - 1];
    d = j.diag[i] - x - b2 / d;
    if (std::fabs(d) < j.pivmin)
      d = -j.pivmin;
    if (d < 0.0)
      ++count;
  }
  return count;
}

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

Bracket gershgorin(const StandardForm& j) {
  Bracket g{std::numeric_limits<double>::max(),
            std::numeric_limits<double>::lowest()};
  for (std::size_t i = 0; i < j.dim(); ++i) {
    const double r = (i > 0 ? std::fabs(j.off[i - 1]) : 0.0) +
                     (i + 1 < j.dim() ? std::fabs(j.off[i]) : 0.0);
    g.lo = std::min(g.lo, j.diag[i] - r);
    g.hi = std::max(g.hi, j.diag[i] + r);
  }
  const double pad = std::max(std::fabs(g.lo), std::fabs(g.hi)) * 16.0 * eps +
                     2.0 * j.pivmin;
  g.lo -= pad;
  g.hi += pad;
  return g;
}

// k-th smallest eigenvalue (1-indexed) by bisection on the Sturm count.
double bisect_kth(const StandardForm& j, std::size_t k, Bracket g,
                  double tol) {
  double lo = g.lo, hi = g.hi;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    if (!(width > tol * std::max(std::fabs(lo), std::fabs(hi)) + 2.0 * j.pivmin) ||
        mid == lo || mid == hi)
      return mid;
    if (sturm_count(j, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
}

// Solve (J - shift I) u = rhs by LU with partial (adjacent-row)
// pivoting; the matrix is near-singular by construction, which is
// exactly what inverse iteration wants.
bool solve_shifted(const StandardForm& j, double shift,
                   const std::vector<double>& rhs, std::vector<double>& u) {
  const std::size_t n = j.dim();
  // Working copies of the three bands plus the fill-in band.
  std::vector<double> dl(n > 0 ? n - 1 : 0), dd(n), du(n > 0 ? n - 1 : 0),
      du2(n > 1 ? n - 2 : 0, 0.0);
  std::vector<int> piv(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    dd[i] = j.diag[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i)
    dl[i] = du[i] = j.off[i];

  u = rhs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::fabs(dd[i]) >= std::fabs(dl[i])) {
      if (dd[i] == 0.0)
        dd[i] = j.pivmin;
      const double m = dl[i] / dd[i];
      dd[i + 1] -= m * du[i];
      dl[i] = m; // store multiplier
      piv[i] = 0;
    } else {
      const double m = dd[i] / dl[i];
      dd[i] = dl[i];
      const double t = dd[i + 1];
      dd[i + 1] = du[i] - m * t;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -m * du[i + 1];
      }
      du[i] = t;
      dl[i] = m;
      piv[i] = 1;
    }
  }
  if (dd[n - 1] == 0.0)
    dd[n - 1] = j.pivmin;

  // Forward sweep.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (piv[i] == 1)
      std::swap(u[i], u[i + 1]);
    u[i + 1] -= dl[i] * u[i];
  }
  // Back substitution.
  u[n - 1] /= dd[n - 1];
  if (n >= 2)
    u[n - 2] = (u[n - 2] - du[n - 2] * u[n - 1]) / dd[n - 2];
  for (std::size_t ii = n; ii >= 3; --ii) {
    const std::size_t i = ii - 3;
    u[i] = (u[i] - du[i] * u[i + 1] - du2[i] * u[i + 2]) / dd[i];
  }
  for (double v : u)
    if (!std::isfinite(v))
      return false;
  return true;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return std::sqrt(s);
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::fabs(x));
  return m;
}

// Normalize with an overflow guard: entries can reach 1e300 when the
// shift sits on the eigenvalue to machine precision.
bool safe_normalize(std::vector<double>& v) {
  const double m = max_abs(v);
  if (m == 0.0 || !std::isfinite(m))
    return false;
  for (double& x : v)
    x /= m;
  const double n = norm2(v);
  if (n == 0.0 || !std::isfinite(n))
    return false;
  for (double& x : v)
    x /= n;
  return true;
}

void scale_vec(std::vector<double>& v, double c) {
  for (double& x : v)
    x *= c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

std::vector<double> matvec(const StandardForm& j, const std::vector<double>& v) {
  const std::size_t n = j.dim();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = j.diag[i] * v[i];
    if (i > 0)
      s += j.off[i - 1] * v[i - 1];
    if (i + 1 < n)
      s += j.off[i] * v[i + 1];
    w[i] = s;
  }
  return w;
}

// Inverse iteration for the eigenvector at lambda, re-orthogonalized
// against already-computed vectors of a near-degenerate cluster.
std::vector<double>
inverse_iterate(const StandardForm& j, double& lambda,
                const std::vector<const std::vector<double>*>& cluster,
                std::size_t k_index) {
  const std::size_t n = j.dim();
  Rng rng(Rng::splitmix64(0xE1CEB1A5ULL + k_index));
  std::vector<double> u(n);

  auto shifted_solve = [&](double shift, const std::vector<double>& rhs,
                           std::vector<double>& w) {
    if (solve_shifted(j, shift, rhs, w) && max_abs(w) <
                                               std::numeric_limits<double>::max())
      return true;
    // Overflowed through a pivmin pivot; the direction survives a scaled
    // right-hand side.
    std::vector<double> small = rhs;
    scale_vec(small, 1e-200);
    return solve_shifted(j, shift, small, w) &&
           max_abs(w) < std::numeric_limits<double>::max();
  };

  for (int restart = 0; restart < 5; ++restart) {
    for (double& x : u)
      x = rng.uniform(-1.0, 1.0);
    scale_vec(u, 1.0 / norm2(u));
    bool ok = true;
    for (int iter = 0; iter < 3 && ok; ++iter) {
      std::vector<double> w;
      ok = shifted_solve(lambda, u, w);
      if (!ok)
        break;
      for (const auto* prev : cluster) {
        const double c = dot(w, *prev);
        for (std::size_t i = 0; i < n; ++i)
          w[i] -= c * (*prev)[i];
      }
      if (!safe_normalize(w)) {
        ok = false;
        break;
      }
      u = std::move(w);
    }
    if (!ok)
      continue;
    // One Rayleigh-quotient polish; keep it only if it stays consistent
    // with the bisection bracket.
    const double rho = dot(u, matvec(j, u));
    if (std::isfinite(rho) &&
        std::fabs(rho - lambda) <=
            1e-8 * std::max(1.0, std::fabs(lambda)) + 1e-10) {
      std::vector<double> w;
      if (shifted_solve(rho, u, w)) {
        for (const auto* prev : cluster) {
          const double c = dot(w, *prev);
          for (std::size_t i = 0; i < n; ++i)
            w[i] -= c * (*prev)[i];
        }
        if (safe_normalize(w)) {
          u = std::move(w);
          lambda = rho;
        }
      }
    }
    return u;
  }
  throw NumericFailure("inverse iteration failed to converge for eigenvalue "
                       "index " +
                           std::to_string(k_index + 1),
                       k_index + 1);
}

} // namespace

Pencil assemble_pencil(const KreinString& s, BoundaryCondition bc) {
  Pencil p;
  p.bc = bc;

  std::vector<Atom> atoms;
  if (bc == BoundaryCondition::dirichlet) {
    atoms = s.interior_atoms();
    if (atoms.empty())
      throw DegenerateInput("Dirichlet pencil needs at least one interior "
                            "atom");
  } else {
    if (s.has_boundary_atom())
      throw UnsupportedConfiguration(
          "Neumann conditions require a string without boundary atoms");
    atoms.assign(s.atoms().begin(), s.atoms().end());
    if (atoms.empty())
      throw DegenerateInput("Neumann pencil needs at least one atom");
  }

  const std::size_t n = atoms.size();
  p.k_diag.assign(n, 0.0);
  p.k_off.assign(n > 1 ? n - 1 : 0, 0.0);
  p.m_diag.resize(n);
  p.positions.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.m_diag[i] = atoms[i].weight;
    p.positions[i] = atoms[i].position;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double cond = 1.0 / (atoms[i + 1].position - atoms[i].position);
    p.k_off[i] = -cond;
    p.k_diag[i] += cond;
    p.k_diag[i + 1] += cond;
  }
  if (bc == BoundaryCondition::dirichlet) {
    p.k_diag.front() += 1.0 / (atoms.front().position - s.left());
    p.k_diag.back() += 1.0 / (s.right() - atoms.back().position);
  }
  return p;
}

std::size_t count_leq(const Pencil& p, double x) {
  if (p.dim() == 0)
    return 0;
  const StandardForm j = to_standard(p);
  std::size_t c = sturm_count(j, x);
  // The Neumann zero mode is structural; pivot rounding must not lose it.
  if (p.bc == BoundaryCondition::neumann && x >= 0.0)
    c = std::max<std::size_t>(c, 1);
  return c;
}

std::size_t count_leq(const KreinString& s, BoundaryCondition bc, double x) {
  if (bc == BoundaryCondition::dirichlet && s.interior_atoms().empty())
    return 0;
  return count_leq(assemble_pencil(s, bc), x);
}

Spectrum eigenvalues(const KreinString& s, BoundaryCondition bc,
                     std::size_t count, double tol) {
  if (!(tol > 0.0))
    throw DomainError("eigensolver tolerance must be positive");

  Spectrum out;
  out.bc = bc;
  if (bc == BoundaryCondition::dirichlet && s.interior_atoms().empty()) {
    out.count_clipped = count != all_eigenvalues && count > 0;
    return out;
  }

  const Pencil p = assemble_pencil(s, bc);
  const StandardForm j = to_standard(p);
  const std::size_t dim = p.dim();

  std::size_t want = count;
  if (want == all_eigenvalues)
    want = dim;
  if (want > dim) {
    want = dim;
    out.count_clipped = true;
  }
  out.positions = p.positions;

  const Bracket g = gershgorin(j);
  std::vector<double> lambdas;
  lambdas.reserve(want);
  std::size_t start_k = 1;
  if (bc == BoundaryCondition::neumann && want >= 1) {
    lambdas.push_back(0.0); // structural zero mode
    start_k = 2;
  }
  for (std::size_t k = start_k; k <= want; ++k) {
    Bracket local = g;
    if (!lambdas.empty())
      local.lo = lambdas.back();
    if (bc == BoundaryCondition::dirichlet)
      local.lo = std::max(local.lo, 0.0);
    lambdas.push_back(bisect_kth(j, k, local, tol));
  }

  // Eigenvectors in the standard form; dm-normalization is automatic
  // because |u|_2 = |M^{1/2} f|_2.
  std::vector<std::vector<double>> us(want);
  for (std::size_t k = 0; k < want; ++k) {
    if (bc == BoundaryCondition::neumann && k == 0) {
      us[k].assign(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i)
        us[k][i] = std::sqrt(p.m_diag[i]);
      scale_vec(us[k], 1.0 / norm2(us[k]));
      continue;
    }
    std::vector<const std::vector<double>*> cluster;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double gap = std::fabs(lambdas[k] - lambdas[kk]);
      if (gap <= 1e-6 * std::max(1.0, std::fabs(lambdas[k])))
        cluster.push_back(&us[kk]);
    }
    const double bisected = lambdas[k];
    double lam = bisected;
    us[k] = inverse_iterate(j, lam, cluster, k);
    // The Rayleigh polish must not break the strict ordering the
    // bisection brackets guarantee.
    if (k > 0 && lam <= lambdas[k - 1])
      lam = bisected;
    lambdas[k] = lam;
  }

  // Order and diagnostics.
  for (std::size_t k = 1; k < want; ++k) {
    const double scale = std::max(std::fabs(lambdas[k]), std::fabs(lambdas[0]));
    if (lambdas[k] - lambdas[k - 1] < 1e-14 * std::max(1.0, scale))
      out.small_gap_flag = true;
  }

  out.eigenvalues = lambdas;
  out.eigenvectors.resize(want);
  out.residuals.resize(want);
  for (std::size_t k = 0; k < want; ++k) {
    std::vector<double> f(dim);
    for (std::size_t i = 0; i < dim; ++i)
      f[i] = us[k][i] / std::sqrt(p.m_diag[i]);
    for (std::size_t i = 0; i < dim; ++i) {
      if (f[i] != 0.0) {
        if (f[i] < 0.0)
          for (double& v : f)
            v = -v;
        break;
      }
    }
    double res = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      double r = p.k_diag[i] * f[i] - lambdas[k] * p.m_diag[i] * f[i];
      if (i > 0)
        r += p.k_off[i - 1] * f[i - 1];
      if (i + 1 < dim)
        r += p.k_off[i] * f[i + 1];
      res = std::max(res, std::fabs(r));
    }
    out.residuals[k] = res;
    out.eigenvectors[k] = std::move(f);
  }
  return out;
}

double green_kernel(double a, double b, double x, double y) {
  if (y <= x)
    return (y - a) * (b - x) / (b - a);
  return (x - a) * (b - y) / (b - a);
}

double green_residual(const KreinString& s, double lambda,
                      const std::vector<double>& f) {
  const std::vector<Atom> atoms = s.interior_atoms();
  if (f.size() != atoms.size())
    throw ContractViolation("green_residual: eigenvector length does not "
                            "match the interior atom count");
  double worst = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    // Neumaier summation: the terms are large and cancel for high modes.
    double sum = 0.0, comp = 0.0;
    for (std::size_t jj = 0; jj < atoms.size(); ++jj) {
      const double term = green_kernel(s.left(), s.right(), atoms[i].position,
                                       atoms[jj].position) *
                          f[jj] * atoms[jj].weight;
      const double t = sum + term;
      if (std::fabs(sum) >= std::fabs(term))
        comp += (sum - t) + term;
      else
        comp += (term - t) + sum;
      sum = t;
    }
    worst = std::max(worst, std::fabs(f[i] - lambda * (sum + comp)));
  }
  return worst;
}

} // namespace spectring
