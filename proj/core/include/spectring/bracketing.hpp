#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spectring/eigensolver.hpp"
#include "spectring/string.hpp"

namespace spectring {

// Dirichlet-Neumann bracketing: integer inequalities between eigenvalue
// counting functions. These are theorems for the tridiagonal pencils, so
// any recorded violation is an implementation bug; the report keeps a
// violation log for exactly that purpose.

struct DnCounts {
  std::size_t dirichlet = 0;
  std::size_t neumann = 0;
};

// (N_D(x), N_N(x)) for the whole interval. Contract:
// N_D <= N_N <= N_D + 2. Requires no boundary atoms.
DnCounts dn_gap(const KreinString& s, double x);

struct BracketRow {
  double x = 0.0;
  std::size_t whole_dirichlet = 0;
  std::size_t whole_neumann = 0;
  std::vector<std::size_t> cell_dirichlet;
  std::vector<std::size_t> cell_neumann;
  bool ok_dn_gap = false;         // N_D <= N_N <= N_D + 2
  bool ok_superadditive = false;  // N_D(whole) >= sum N_D(cells)
  bool ok_subadditive = false;    // N_N(whole) <= sum N_N(cells)
  bool ok_crude_bound = false;    // N_D(whole) <= 2*cells + sum N_D(cells)

  std::size_t cell_dirichlet_sum() const;
  std::size_t cell_neumann_sum() const;
};

struct BracketReport {
  std::vector<double> cuts;
  std::vector<BracketRow> rows;
  std::vector<std::string> violations;
  bool all_ok() const { return violations.empty(); }
};

// Whole-interval and per-cell counts for the partition induced by
// `cuts` (strictly inside the interval, sorted, atom-free; an atom at a
// cut throws CutPointCollision). Cells without atoms count zero under
// both conditions. Requires no boundary atoms.
BracketRow partition_counts(const KreinString& s,
                            const std::vector<double>& cuts, double x);

// Crude counting bound N_D(whole) <= 2 n_cells + sum N_D(cells).
bool crude_bound_check(const KreinString& s, const std::vector<double>& cuts,
                       double x);

// Counting-function form of the affine rescaling identity:
// N(s, x) == N(rescale(s, gamma, beta), x / gamma^(1+1/beta)) for both
// boundary conditions (Dirichlet only when s has boundary atoms). The
// evaluation point is jittered off the spectrum by a relative 1e-9
// before the integer comparison.
bool scaling_count_check(const KreinString& s, double gamma, double beta,
                         double x);

// Convenience: run partition_counts over a grid of x values and collect
// the report (used by the `count` CLI subcommand).
BracketReport bracket_report(const KreinString& s,
                             const std::vector<double>& cuts,
                             const std::vector<double>& x_grid);

} // namespace spectring
