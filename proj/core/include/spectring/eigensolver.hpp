#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "spectring/string.hpp"

namespace spectring {

enum class BoundaryCondition { dirichlet, neumann };

// Symmetric tridiagonal pencil K v = lambda M v on the interior atoms of
// a string. K is the graph Laplacian of the atom path with edge
// conductances 1/gap; under Dirichlet conditions the first and last atom
// are additionally grounded to the interval endpoints, under Neumann
// they are not (so K 1 = 0 and the pencil is singular).
struct Pencil {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::vector<double> k_diag;
  std::vector<double> k_off;  // size dim-1, all entries < 0
  std::vector<double> m_diag; // atom weights, all > 0
  std::vector<double> positions;

  std::size_t dim() const { return k_diag.size(); }
};

// Dirichlet needs at least one interior atom; Neumann needs at least one
// atom and none at the endpoints (throws UnsupportedConfiguration).
Pencil assemble_pencil(const KreinString& s, BoundaryCondition bc);

inline constexpr std::size_t all_eigenvalues =
    std::numeric_limits<std::size_t>::max();

struct Spectrum {
  BoundaryCondition bc = BoundaryCondition::dirichlet;
  std::vector<double> eigenvalues;              // strictly increasing
  std::vector<std::vector<double>> eigenvectors; // unit dm-norm, first
                                                 // nonzero entry positive
  std::vector<double> residuals;                // max |K v - lambda M v|
  std::vector<double> positions;                // atoms the vectors live on
  bool count_clipped = false;  // requested more than dim eigenvalues
  bool small_gap_flag = false; // a relative gap below 1e-14 was seen
};

// Lowest `count` eigenvalues of the pencil by Sturm-sequence bisection
// (Gershgorin brackets, relative tolerance tol), eigenvectors by inverse
// iteration with cluster re-orthogonalization. The Neumann zero mode is
// structural (the free path Laplacian annihilates constants) and is
// returned as exactly 0 with the constant eigenvector.
Spectrum eigenvalues(const KreinString& s, BoundaryCondition bc,
                     std::size_t count = all_eigenvalues,
                     double tol = 1e-12);

// Number of eigenvalues <= x, by the inertia of K - x M (Sturm pivot
// count, no diagonalization). Closed counting: zero pivots count as <=.
std::size_t count_leq(const KreinString& s, BoundaryCondition bc, double x);

// Counting function evaluated directly on an assembled pencil.
std::size_t count_leq(const Pencil& p, double x);

// Defect of the Green-kernel fixed-point identity
//   F(x) = lambda sum_y G(x,y) F(y) w_y,  G the explicit Dirichlet
// kernel of the interval, sup over atoms. F holds the eigenvector values
// at the interior atoms (unit dm-norm).
double green_residual(const KreinString& s, double lambda,
                      const std::vector<double>& f);

// Dirichlet Green kernel of [a, b].
double green_kernel(double a, double b, double x, double y);

} // namespace spectring
