#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spectring/walk.hpp"

namespace spectring {

struct Atom {
  double position = 0.0;
  double weight = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// An atomic speed measure on a closed interval: the central object of the
// library. Positions are strictly increasing inside [left, right], all
// weights strictly positive. Immutable after construction.
//
// Boundary atoms (at left or right) are legal; the Dirichlet eigensolver
// ignores them, the Neumann eigensolver rejects them.
class KreinString {
public:
  KreinString(double left, double right, std::vector<Atom> atoms);

  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  // Compensated (Neumaier) sum of the weights.
  double total_mass() const;

  bool has_boundary_atom() const;
  // Atoms strictly inside (left, right).
  std::vector<Atom> interior_atoms() const;

private:
  double left_;
  double right_;
  std::vector<Atom> atoms_;
};

// Continuous piecewise-linear function: knots strictly increasing,
// first knot = interval left end, last knot = right end. Evaluation
// between knots is linear interpolation.
class PiecewiseLinearFunction {
public:
  PiecewiseLinearFunction(std::vector<double> knots,
                          std::vector<double> values);

  double operator()(double x) const;
  std::span<const double> knots() const { return knots_; }
  std::span<const double> values() const { return values_; }
  double left() const { return knots_.front(); }
  double right() const { return knots_.back(); }

private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

// Lattice-to-string construction: atoms at x_k = sum_{j<=k} U(j)
// (x_0 = 0, compensated prefix sums), weights H(k), interval [0, x_n].
KreinString build_string(const ScaleSpeedPair& pair);

// The piecewise-linear lift: the unique function on [0, x_n], linear
// between consecutive atoms, taking value f(k) at x_k. f must have n+1
// entries.
PiecewiseLinearFunction lift(const ScaleSpeedPair& pair,
                             const std::vector<double>& f);

// Restriction to [a, b]: keeps exactly the atoms in the open interval
// (a, b). An atom exactly at a cut point throws CutPointCollision.
KreinString restrict_string(const KreinString& s, double a, double b);

// Affine rescaling M(x) = gamma^{1/beta} m(x/gamma): positions and the
// interval scale by gamma, weights by gamma^{1/beta}. Eigenvalues of the
// result are the originals divided by gamma^{1 + 1/beta}.
KreinString rescale(const KreinString& s, double gamma, double beta);

// A right-continuous nondecreasing pure-jump function on [0, T],
// starting at 0: jumps at strictly increasing positions in (0, T].
struct StepFunction {
  double horizon = 0.0;          // T
  std::vector<Atom> jumps;       // (position u_i, size w_i)

  void validate() const;
  // m(t) = sum of sizes with u_i <= t (clamped to the horizon beyond T).
  double value(double t) const;
};

// String of the generalized inverse m^{-1}(t) = inf{s : m(s) > t} on
// [0, m(T)]: the plateau [0, u_1) becomes an atom of weight u_1 at level
// 0, each plateau [u_i, u_{i+1}) an atom of weight u_{i+1} - u_i at
// level m(u_i), and the final plateau an atom of weight T - u_last at
// level m(T). Zero-length plateaus are dropped; total weight is T.
KreinString generalized_inverse(const StepFunction& m);

} // namespace spectring
