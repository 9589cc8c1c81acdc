#pragma once

#include <cstddef>
#include <vector>

namespace spectring {

class KreinString;
class PiecewiseLinearFunction;

// Nearest-neighbor jump rates on the lattice sites 0..n (site k sits at
// k*step). Interior sites 1..n-1 carry both rates; the boundary rates
// c(0,1) and c(n,n-1) are required too, because the speed measure of the
// killed walk carries atoms of weight H(0) and H(n) at the endpoints.
//
// Storage: right[k] = c(k, k+1) for k = 0..n-1,
//          left[k]  = c(k, k-1) for k = 1..n  (stored at index k-1).
struct RateField {
  std::size_t n = 0;
  double step = 1.0;
  std::vector<double> right; // size n, index k
  std::vector<double> left;  // size n, index k-1

  RateField() = default;
  RateField(std::size_t n_, double step_, std::vector<double> left_,
            std::vector<double> right_);

  double left_rate(std::size_t k) const { return left[k - 1]; }   // k in 1..n
  double right_rate(std::size_t k) const { return right[k]; }     // k in 0..n-1

  // Throws DomainError on non-positive rates, n < 2 or size mismatch.
  void validate() const;

  // c == 1/2 in both directions on every edge: the walk whose Dirichlet
  // eigenvalues are 1 - cos(pi k / n).
  static RateField ssrw(std::size_t n, double step = 1.0);

  // Trap rates c(x, x+-1) = 1/(2 tau(x)): mean waiting time tau(x),
  // unbiased jump. tau must have n+1 entries (sites 0..n).
  static RateField trap(const std::vector<double>& tau, double step = 1.0);

  // Barrier (conductance) rates c(x-1,x) = c(x,x-1) = 1/tau(x), tau
  // indexed by the upper edge endpoint 1..n.
  static RateField barrier(const std::vector<double>& tau, double step = 1.0);

  // General two-parameter trap family: c(x,y) = tau(x)^(-1+a) tau(y)^a.
  static RateField trap_asymmetric(const std::vector<double>& tau, double a,
                                   double step = 1.0);
};

// The (U, H) decomposition of a rate field: c(x,y) = 1/(H(x) U(max(x,y))).
// U is defined on 1..n, H on 0..n; both strictly positive. The pair is
// unique up to the multiplicative gauge carried along explicitly.
struct ScaleSpeedPair {
  std::vector<double> u; // U(k), k = 1..n, stored at k-1
  std::vector<double> h; // H(k), k = 0..n
  double gauge = 1.0;
  double step = 1.0;

  std::size_t n() const { return u.size(); }
  double U(std::size_t k) const { return u[k - 1]; } // k in 1..n
  double H(std::size_t k) const { return h[k]; }     // k in 0..n

  void validate() const;
};

// Solve the recursion U(k+1) = U(k) c(k,k-1)/c(k,k+1),
// H(k) = 1/(c(k,k-1) U(k)), seeded with U(1) = gauge. Boundary values:
// H(0) = 1/(c(0,1) U(1)), H(n) = 1/(c(n,n-1) U(n)).
// Throws NumericRangeError (naming the first failing index) if any U or
// H leaves the normal floating-point range.
ScaleSpeedPair decompose_rates(const RateField& rates, double gauge);

// Exact inverse modulo gauge: c(x,y) = 1/(H(x) U(max(x,y))).
RateField compose_rates(const ScaleSpeedPair& pair);

// D_n(f) = sum_{j=1..n} U(j)^{-1} (f(j) - f(j-1))^2 for f on sites 0..n
// with f(0) = f(n) = 0. Throws ContractViolation otherwise.
double dirichlet_form(const ScaleSpeedPair& pair,
                      const std::vector<double>& f);

// Rayleigh quotient of a piecewise-linear trial function on a string:
// integral of the squared slope over the interval divided by the dm-mass
// of F^2. Throws DegenerateInput when the denominator vanishes.
double rayleigh_quotient(const KreinString& s,
                         const PiecewiseLinearFunction& f);

} // namespace spectring
