#pragma once

#include <cstddef>
#include <vector>

#include "spectring/string.hpp"

namespace spectring {

// Fundamental solutions of -D_m D_x F = lambda F for atomic dm, by exact
// atom-to-atom propagation: between atoms F is linear; at an atom of
// weight w the slope jumps by -lambda * w * F(atom). phi has initial
// data (1, 0), psi has (0, 1), both taken at the left endpoint.

struct ShootingState {
  double position = 0.0;
  double value = 0.0;
  double slope = 0.0; // right derivative
};

struct ShootingResult {
  double value = 0.0; // F(right)
  double slope = 0.0; // F'_+(right)
  std::vector<ShootingState> trace; // state after each atom update
};

ShootingResult shoot(const KreinString& s, double lambda, double init_value,
                     double init_slope);

inline ShootingResult shoot_phi(const KreinString& s, double lambda) {
  return shoot(s, lambda, 1.0, 0.0);
}
inline ShootingResult shoot_psi(const KreinString& s, double lambda) {
  return shoot(s, lambda, 0.0, 1.0);
}

// Power-series evaluation psi(x, lambda) = sum_j (-lambda)^j psi_j(x),
// psi_0(x) = x, psi_{j+1}(x) = integral over (0,x) of (x-s) psi_j(s) dm.
// For an atomic measure with N atoms strictly inside (left, x) the
// series terminates at j = N, so the tail bound is zero once j_max >= N;
// otherwise it is ell * sum_{j > j_max} (|lambda| c)^j / j! with
// c = integral of (ell - s) dm(s).
struct PsiSeries {
  double value = 0.0;
  double tail_bound = 0.0;
  double term_magnitude = 0.0; // sum_j |lambda|^j psi_j(x), FP error scale
  bool degraded = false;       // tail bound exceeds 1e3 * |value|
};

PsiSeries psi_series(const KreinString& s, double x, double lambda,
                     std::size_t j_max);

// All zeros of lambda -> psi(right, lambda) in (0, lambda_max]. Brackets
// come from Sturm counts of the matrix pencil (one simple zero each);
// inside a bracket the zero is located by bisection on the sign of psi,
// evaluated with overflow-safe rescaling. A bracket whose endpoints do
// not change sign throws InternalConsistencyError.
std::vector<double> dirichlet_zeros(const KreinString& s, double lambda_max,
                                    double tol = 1e-12);

// Neumann characteristic function: integral of phi(s, lambda) dm(s).
// lambda != 0 is a Neumann eigenvalue iff this vanishes; at lambda = 0
// it equals the total mass (the zero mode is handled separately).
// Requires a string without boundary atoms.
double neumann_condition(const KreinString& s, double lambda);

// Nonzero Neumann eigenvalues in (0, lambda_max], bracketed by Neumann
// Sturm counts and bisected on the sign of the characteristic function.
std::vector<double> neumann_zeros(const KreinString& s, double lambda_max,
                                  double tol = 1e-12);

} // namespace spectring
