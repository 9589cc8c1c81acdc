#include "spectring/bracketing.hpp"

#include <cmath>
#include <string>

#include "spectring/error.hpp"

namespace spectring {

namespace {

// Counting on a partition cell; a cell without atoms carries the
// zero-dimensional operator (no spectrum) under either condition.
std::size_t cell_count(const KreinString& cell, BoundaryCondition bc,
                       double x) {
  if (bc == BoundaryCondition::dirichlet) {
    if (cell.interior_atoms().empty())
      return 0;
  } else if (cell.size() == 0) {
    return 0;
  }
  return count_leq(cell, bc, x);
}

} // namespace

std::size_t BracketRow::cell_dirichlet_sum() const {
  std::size_t s = 0;
  for (std::size_t c : cell_dirichlet)
    s += c;
  return s;
}

std::size_t BracketRow::cell_neumann_sum() const {
  std::size_t s = 0;
  for (std::size_t c : cell_neumann)
    s += c;
  return s;
}

DnCounts dn_gap(const KreinString& s, double x) {
  if (s.has_boundary_atom())
    throw UnsupportedConfiguration(
        "dn_gap requires a string without boundary atoms");
  DnCounts out;
  out.dirichlet = count_leq(s, BoundaryCondition::dirichlet, x);
  out.neumann = count_leq(s, BoundaryCondition::neumann, x);
  return out;
}

BracketRow partition_counts(const KreinString& s,
                            const std::vector<double>& cuts, double x) {
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    if (!(cuts[i] > s.left() && cuts[i] < s.right()))
      throw DomainError("partition cut outside the open interval");
    if (i > 0 && !(cuts[i] > cuts[i - 1]))
      throw DomainError("partition cuts must be strictly increasing");
    for (const Atom& a : s.atoms())
      if (a.position == cuts[i])
        throw CutPointCollision("atom at partition cut " +
                                    std::to_string(cuts[i]),
                                cuts[i]);
  }

  BracketRow row;
  row.x = x;
  const DnCounts whole = dn_gap(s, x);
  row.whole_dirichlet = whole.dirichlet;
  row.whole_neumann = whole.neumann;

  std::vector<double> edges;
  edges.push_back(s.left());
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(s.right());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const KreinString cell = restrict_string(s, edges[i], edges[i + 1]);
    row.cell_dirichlet.push_back(
        cell_count(cell, BoundaryCondition::dirichlet, x));
    row.cell_neumann.push_back(cell_count(cell, BoundaryCondition::neumann, x));
  }

  const std::size_t n_cells = row.cell_dirichlet.size();
  row.ok_dn_gap = row.whole_dirichlet <= row.whole_neumann &&
                  row.whole_neumann <= row.whole_dirichlet + 2;
  row.ok_superadditive = row.whole_dirichlet >= row.cell_dirichlet_sum();
  row.ok_subadditive = row.whole_neumann <= row.cell_neumann_sum();
  row.ok_crude_bound =
      row.whole_dirichlet <= 2 * n_cells + row.cell_dirichlet_sum();
  return row;
}

bool crude_bound_check(const KreinString& s, const std::vector<double>& cuts,
                       double x) {
  return partition_counts(s, cuts, x).ok_crude_bound;
}

bool scaling_count_check(const KreinString& s, double gamma, double beta,
                         double x) {
  // Nudge the threshold off the spectrum: closed counting at a floating
  // point value that lands exactly on an eigenvalue is ambiguous across
  // the rescaling roundoff.
  const double xj = x * (1.0 + 1e-9);
  const KreinString scaled = rescale(s, gamma, beta);
  const double x_scaled = xj / std::pow(gamma, 1.0 + 1.0 / beta);

  const std::size_t nd = count_leq(s, BoundaryCondition::dirichlet, xj);
  const std::size_t nd2 =
      count_leq(scaled, BoundaryCondition::dirichlet, x_scaled);
  if (nd != nd2)
    return false;
  if (s.has_boundary_atom())
    return true; // Neumann side undefined for boundary atoms
  const std::size_t nn = count_leq(s, BoundaryCondition::neumann, xj);
  const std::size_t nn2 =
      count_leq(scaled, BoundaryCondition::neumann, x_scaled);
  return nn == nn2;
}

BracketReport bracket_report(const KreinString& s,
                             const std::vector<double>& cuts,
                             const std::vector<double>& x_grid) {
  BracketReport report;
  report.cuts = cuts;
  for (double x : x_grid) {
    BracketRow row = partition_counts(s, cuts, x);
    if (!row.ok_dn_gap)
      report.violations.push_back("dn_gap violated at x = " +
                                  std::to_string(x));
    if (!row.ok_superadditive)
      report.violations.push_back("Dirichlet superadditivity violated at x = " +
                                  std::to_string(x));
    if (!row.ok_subadditive)
      report.violations.push_back("Neumann subadditivity violated at x = " +
                                  std::to_string(x));
    if (!row.ok_crude_bound)
      report.violations.push_back("crude bound violated at x = " +
                                  std::to_string(x));
    report.rows.push_back(std::move(row));
  }
  return report;
}

} // namespace spectring
