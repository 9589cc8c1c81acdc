#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "spectring/eigensolver.hpp"
#include "spectring/string.hpp"
#include "spectring/walk.hpp"

// Independent oracles used to freeze expected values. Everything here is
// deliberately naive (dense, brute force) and shares no code path with
// the library implementations it checks.

namespace spectring::testing {

// Direct solve of the rate-decomposition system c(x,y) = 1/(H(x)U(x v y)):
// alternates between the two equations instead of using the ratio
// recursion.
struct NannaSolution {
  std::vector<double> u; // U(1..n)
  std::vector<double> h; // H(0..n)
};

inline NannaSolution solve_nanna(const RateField& r, double gauge) {
  const std::size_t n = r.n;
  NannaSolution sol;
  sol.u.resize(n);
  sol.h.resize(n + 1);
  sol.u[0] = gauge;
  sol.h[0] = 1.0 / (r.right_rate(0) * sol.u[0]);
  for (std::size_t k = 1; k <= n; ++k) {
    sol.h[k] = 1.0 / (r.left_rate(k) * sol.u[k - 1]);
    if (k < n)
      sol.u[k] = 1.0 / (r.right_rate(k) * sol.h[k]);
  }
  return sol;
}

// Dense symmetric-matrix Jacobi eigenvalues (ascending).
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        off += a[i][j] * a[i][j];
    if (off < 1e-28)
      break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0)
          continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i)
    ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Generalized symmetric eigenvalues of (A, B), B positive definite, via
// Cholesky reduction plus Jacobi. Dense, for small test problems only.
inline std::vector<double>
generalized_eigenvalues(const std::vector<std::vector<double>>& a,
                        const std::vector<std::vector<double>>& b) {
  const std::size_t n = a.size();
  // B = L L^T
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = b[i][j];
      for (std::size_t k = 0; k < j; ++k)
        s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 0.0))
          throw std::runtime_error("mass projection not positive definite");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  // C = L^{-1} A L^{-T}
  std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
  // Solve L X = A (column by column), then L C^T = X^T.
  std::vector<std::vector<double>> x(n, std::vector<double>(n, 0.0));
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = a[i][col];
      for (std::size_t k = 0; k < i; ++k)
        s -= l[i][k] * x[k][col];
      x[i][col] = s / l[i][i];
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[col][i];
      for (std::size_t k = 0; k < i; ++k)
        s -= l[i][k] * c[col][k];
      c[col][i] = s / l[i][i];
    }
  }
  // Symmetrize roundoff before Jacobi.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (c[i][j] + c[j][i]);
      c[i][j] = c[j][i] = m;
    }
  return jacobi_eigenvalues(c);
}

// Dense K and M of a pencil.
inline std::vector<std::vector<double>> dense_k(const Pencil& p) {
  const std::size_t n = p.dim();
  std::vector<std::vector<double>> k(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    k[i][i] = p.k_diag[i];
    if (i + 1 < n)
      k[i][i + 1] = k[i + 1][i] = p.k_off[i];
  }
  return k;
}

inline std::vector<std::vector<double>> dense_m(const Pencil& p) {
  const std::size_t n = p.dim();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    m[i][i] = p.m_diag[i];
  return m;
}

// Largest Rayleigh quotient over the span of the columns of v.
inline double max_rayleigh_over_span(const Pencil& p,
                                     const std::vector<std::vector<double>>& v) {
  const std::size_t dim = p.dim();
  const std::size_t k = v.size();
  auto kmat = dense_k(p);
  auto mmat = dense_m(p);
  std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> b(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double sa = 0.0, sb = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        double krow = kmat[r][r] * v[j][r];
        if (r > 0)
          krow += kmat[r][r - 1] * v[j][r - 1];
        if (r + 1 < dim)
          krow += kmat[r][r + 1] * v[j][r + 1];
        sa += v[i][r] * krow;
        sb += v[i][r] * mmat[r][r] * v[j][r];
      }
      a[i][j] = sa;
      b[i][j] = sb;
    }
  }
  const std::vector<double> ev = generalized_eigenvalues(a, b);
  return ev.back();
}

// Characteristic value det(K - lambda M) by the tridiagonal continuant
// recurrence: an oracle for the shooting polynomial identity.
inline double tridiag_char(const Pencil& p, double lambda) {
  const std::size_t n = p.dim();
  double dm1 = 1.0;
  double d = p.k_diag[0] - lambda * p.m_diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double dn = (p.k_diag[i] - lambda * p.m_diag[i]) * d -
                      p.k_off[i - 1] * p.k_off[i - 1] * dm1;
    dm1 = d;
    d = dn;
  }
  return d;
}

// Coefficients of the degree-(n-1) polynomial through n points
// (Newton form expanded to monomials).
inline std::vector<double> interpolate_coefficients(
    const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  std::vector<double> divided = ys;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      divided[i] = (divided[i] - divided[i - 1]) / (xs[i] - xs[i - level]);
  std::vector<double> coeff(n, 0.0);
  std::vector<double> basis{1.0}; // product (x - x_0)...(x - x_{k-1})
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      coeff[i] += divided[k] * basis[i];
    if (k + 1 < n) {
      basis.push_back(0.0);
      for (std::size_t i = basis.size() - 1; i >= 1; --i)
        basis[i] = basis[i - 1] - xs[k] * basis[i];
      basis[0] *= -xs[k];
    }
  }
  return coeff;
}

// Sup distance of two piecewise-linear functions extended by zero
// outside their intervals; the difference is piecewise linear with knots
// in the union, so the sup sits on a knot.
inline double pl_sup_distance(const PiecewiseLinearFunction& f,
                              const PiecewiseLinearFunction& g) {
  auto eval = [](const PiecewiseLinearFunction& h, double x) {
    if (x < h.left() || x > h.right())
      return 0.0;
    return h(x);
  };
  double sup = 0.0;
  for (double x : f.knots())
    sup = std::max(sup, std::fabs(eval(f, x) - eval(g, x)));
  for (double x : g.knots())
    sup = std::max(sup, std::fabs(eval(f, x) - eval(g, x)));
  return sup;
}

// Piecewise-linear extension of an eigenvector: zero at the interval
// ends, eigenvector values at its atoms.
inline PiecewiseLinearFunction
eigenfunction_lift(const KreinString& s, const std::vector<double>& positions,
                   const std::vector<double>& values) {
  std::vector<double> knots;
  std::vector<double> vals;
  if (positions.empty() || positions.front() > s.left()) {
    knots.push_back(s.left());
    vals.push_back(0.0);
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    knots.push_back(positions[i]);
    vals.push_back(values[i]);
  }
  if (positions.empty() || positions.back() < s.right()) {
    knots.push_back(s.right());
    vals.push_back(0.0);
  }
  return PiecewiseLinearFunction(std::move(knots), std::move(vals));
}

} // namespace spectring::testing
