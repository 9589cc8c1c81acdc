#include "spectring/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectring/eigensolver.hpp"
#include "spectring/error.hpp"

namespace spectring {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Propagation state with a separate power-of-two exponent so that high
// eigenvalues of long strings do not overflow: true value = v * 2^e.
struct ScaledState {
  double v = 0.0;
  double s = 0.0;
  double acc = 0.0; // running integral of the solution against dm
  int e = 0;

  void renormalize() {
    const double m = std::max(std::fabs(v), std::fabs(s));
    if (m > 0x1p+512 || (m > 0.0 && m < 0x1p-512)) {
      int k = 0;
      std::frexp(m, &k);
      v = std::ldexp(v, -k);
      s = std::ldexp(s, -k);
      acc = std::ldexp(acc, -k);
      e += k;
    }
  }
};

ScaledState propagate_scaled(const KreinString& s, double lambda,
                             double init_value, double init_slope) {
  ScaledState st{init_value, init_slope, 0.0, 0};
  double x = s.left();
  for (const Atom& a : s.atoms()) {
    st.v += st.s * (a.position - x);
    x = a.position;
    st.acc += st.v * a.weight;
    st.s -= lambda * a.weight * st.v;
    st.renormalize();
  }
  st.v += st.s * (s.right() - x);
  return st;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Locate the single zero of `value` inside [lo, hi] by bisection on its
// sign. Endpoint signs are expected to differ.
template <typename F>
double bisect_sign(F&& value, double lo, double hi, double tol) {
  double flo = value(lo);
  const double fhi = value(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi ||
        hi - lo <= tol * std::max({std::fabs(lo), std::fabs(hi), 1e-300}))
      return mid;
    const double fm = value(mid);
    if (fm == 0.0)
      return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
}

// Refine an isolated Sturm bracket down to tol by counting alone.
double bisect_count(const Pencil& pencil, std::size_t k, double lo, double hi,
                    double tol) {
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi ||
        hi - lo <= tol * std::max({std::fabs(lo), std::fabs(hi), 1e-300}))
      return mid;
    if (count_leq(pencil, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
}

// Shrink the Sturm bracket around the k-th eigenvalue until it contains
// that eigenvalue alone: count(lo) = k-1 and count(hi) = k on return.
void isolate_kth(const Pencil& pencil, std::size_t k, double& lo, double& hi) {
  std::size_t clo = count_leq(pencil, lo);
  std::size_t chi = count_leq(pencil, hi);
  while (!(clo == k - 1 && chi == k)) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi)
      break;
    const std::size_t c = count_leq(pencil, mid);
    if (c >= k) {
      hi = mid;
      chi = c;
    } else {
      lo = mid;
      clo = c;
    }
  }
}

std::vector<double> zeros_impl(const KreinString& s, BoundaryCondition bc,
                               double lambda_max, double tol) {
  if (!(lambda_max > 0.0))
    throw DomainError("lambda_max must be positive");
  if (!(tol > 0.0))
    throw DomainError("tolerance must be positive");

  const bool dirichlet = bc == BoundaryCondition::dirichlet;
  if (dirichlet && s.interior_atoms().empty())
    return {};
  const Pencil pencil = assemble_pencil(s, bc);
  const std::size_t total = count_leq(pencil, lambda_max);
  const std::size_t first = dirichlet ? 1 : 2; // skip the Neumann zero mode

  auto characteristic = [&](double lambda) {
    const ScaledState st = dirichlet
                               ? propagate_scaled(s, lambda, 0.0, 1.0)
                               : propagate_scaled(s, lambda, 1.0, 0.0);
    return dirichlet ? st.v : st.acc;
  };

  std::vector<double> zeros;
  // Brackets are seeded from the previous isolation's upper end: it
  // carries count k-1 and sits safely away from the zero it bounds,
  // where the characteristic function's sign is trustworthy.
  double seed = 0.0;
  for (std::size_t k = first; k <= total; ++k) {
    double lo = seed;
    double hi = lambda_max;
    isolate_kth(pencil, k, lo, hi);
    seed = hi;
    const int slo = sign_of(characteristic(lo));
    const int shi = sign_of(characteristic(hi));
    if (slo == 0) {
      zeros.push_back(lo);
      continue;
    }
    if (shi == 0) {
      zeros.push_back(hi);
      continue;
    }
    if (slo != shi) {
      zeros.push_back(bisect_sign(characteristic, lo, hi, tol));
      continue;
    }
    // No sign change: legitimate only when the bracket has already
    // collapsed to the scale where the Sturm pivots and the shooting
    // recursion disagree about the same zero. Anything wider is a bug.
    if (hi - lo <= 1e-7 * std::max(std::fabs(lo), std::fabs(hi))) {
      zeros.push_back(bisect_count(pencil, k, lo, hi, tol));
      continue;
    }
    throw InternalConsistencyError(
        std::string(dirichlet ? "dirichlet_zeros" : "neumann_zeros") +
        ": Sturm bracket endpoints do not change sign; bracket [" +
        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return zeros;
}

} // namespace

ShootingResult shoot(const KreinString& s, double lambda, double init_value,
                     double init_slope) {
  ShootingResult out;
  out.trace.reserve(s.size());
  double v = init_value;
  double slope = init_slope;
  double x = s.left();
  for (const Atom& a : s.atoms()) {
    v += slope * (a.position - x);
    x = a.position;
    slope -= lambda * a.weight * v;
    out.trace.push_back(ShootingState{x, v, slope});
  }
  v += slope * (s.right() - x);
  out.value = v;
  out.slope = slope;
  return out;
}

PsiSeries psi_series(const KreinString& s, double x, double lambda,
                     std::size_t j_max) {
  if (x < s.left() || x > s.right())
    throw DomainError("psi_series: evaluation point outside the interval");

  // Work in coordinates relative to the left endpoint.
  std::vector<double> pos, wts;
  for (const Atom& a : s.atoms()) {
    if (a.position > s.left() && a.position < x) {
      pos.push_back(a.position - s.left());
      wts.push_back(a.weight);
    }
  }
  const double X = x - s.left();
  const std::size_t m = pos.size();

  // psi_j at the atoms and at X, built up level by level.
  std::vector<double> at_atoms(m);
  for (std::size_t i = 0; i < m; ++i)
    at_atoms[i] = pos[i]; // psi_0
  double at_x = X;

  PsiSeries out;
  out.value = at_x;
  out.term_magnitude = std::fabs(at_x);
  double lambda_pow = 1.0;
  const std::size_t levels = std::min<std::size_t>(j_max, m);
  for (std::size_t j = 1; j <= levels; ++j) {
    std::vector<double> next(m, 0.0);
    double next_x = 0.0;
    double partial = 0.0, partial_xw = 0.0;
    // psi_{j+1}(p) = sum_{q < p} (p - q) psi_j(q) w(q)
    //             = p * sum psi_j w - sum q psi_j w, prefix sums.
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = pos[i] * partial - partial_xw;
      partial += at_atoms[i] * wts[i];
      partial_xw += pos[i] * at_atoms[i] * wts[i];
    }
    next_x = X * partial - partial_xw;
    at_atoms = std::move(next);
    at_x = next_x;
    lambda_pow *= -lambda;
    out.value += lambda_pow * at_x;
    out.term_magnitude += std::fabs(lambda_pow) * at_x;
  }

  // Tail: zero once the nesting depth exhausts the atoms (psi_j == 0 for
  // j > m), else ell * sum_{j > j_max} (|lambda| c)^j / j!.
  if (j_max >= m) {
    out.tail_bound = 0.0;
  } else {
    const double ell = s.length();
    double c = 0.0;
    for (const Atom& a : s.atoms())
      if (a.position > s.left() && a.position < s.right())
        c += (s.right() - a.position) * a.weight;
    const double lc = std::fabs(lambda) * c;
    if (lc == 0.0) {
      out.tail_bound = 0.0;
    } else {
      const double log_first =
          static_cast<double>(j_max + 1) * std::log(lc) -
          std::lgamma(static_cast<double>(j_max + 2));
      if (log_first > 690.0) {
        out.tail_bound = inf;
      } else {
        double term = std::exp(log_first);
        double sum = 0.0;
        for (std::size_t j = j_max + 1; j < j_max + 100000; ++j) {
          sum += term;
          term *= lc / static_cast<double>(j + 1);
          if (!(std::isfinite(sum))) {
            sum = inf;
            break;
          }
          if (term < sum * 1e-18 && static_cast<double>(j) > lc)
            break;
        }
        out.tail_bound = ell * sum;
      }
    }
  }
  out.degraded = !(out.tail_bound <= 1e3 * std::fabs(out.value));
  if (out.value == 0.0 && out.tail_bound == 0.0)
    out.degraded = false;
  return out;
}

std::vector<double> dirichlet_zeros(const KreinString& s, double lambda_max,
                                    double tol) {
  return zeros_impl(s, BoundaryCondition::dirichlet, lambda_max, tol);
}

double neumann_condition(const KreinString& s, double lambda) {
  if (s.has_boundary_atom())
    throw UnsupportedConfiguration(
        "neumann_condition requires a string without boundary atoms");
  const ScaledState st = propagate_scaled(s, lambda, 1.0, 0.0);
  return std::ldexp(st.acc, st.e);
}

std::vector<double> neumann_zeros(const KreinString& s, double lambda_max,
                                  double tol) {
  if (s.has_boundary_atom())
    throw UnsupportedConfiguration(
        "neumann_zeros requires a string without boundary atoms");
  return zeros_impl(s, BoundaryCondition::neumann, lambda_max, tol);
}

} // namespace spectring
