#include "spectring/string.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spectring/error.hpp"

namespace spectring {

namespace {

// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

} // namespace

KreinString::KreinString(double left, double right, std::vector<Atom> atoms)
    : left_(left), right_(right), atoms_(std::move(atoms)) {
  if (!(right_ > left_) || !std::isfinite(left_) || !std::isfinite(right_))
    throw DomainError("string interval must be finite with right > left");
  double prev = left_ - 1.0;
  bool first = true;
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.position) || a.position < left_ ||
        a.position > right_)
      throw DomainError("atom position " + std::to_string(a.position) +
                        " outside [" + std::to_string(left_) + ", " +
                        std::to_string(right_) + "]");
    if (!first && !(a.position > prev))
      throw DomainError("atom positions must be strictly increasing");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw DomainError("atom weights must be positive and finite");
    prev = a.position;
    first = false;
  }
}

double KreinString::total_mass() const {
  double sum = 0.0, comp = 0.0;
  for (const Atom& a : atoms_) {
    const double t = sum + a.weight;
    if (sum >= a.weight)
      comp += (sum - t) + a.weight;
    else
      comp += (a.weight - t) + sum;
    sum = t;
  }
  return sum + comp;
}

bool KreinString::has_boundary_atom() const {
  if (atoms_.empty())
    return false;
  return atoms_.front().position == left_ || atoms_.back().position == right_;
}

std::vector<Atom> KreinString::interior_atoms() const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_)
    if (a.position > left_ && a.position < right_)
      out.push_back(a);
  return out;
}

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<double> knots,
                                                 std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.size() < 2 || knots_.size() != values_.size())
    throw DomainError("piecewise-linear function needs matching knot/value "
                      "arrays with at least two knots");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1]))
      throw DomainError("knots must be strictly increasing");
}

double PiecewiseLinearFunction::operator()(double x) const {
  if (x <= knots_.front())
    return values_.front();
  if (x >= knots_.back())
    return values_.back();
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  const double x0 = knots_[i - 1], x1 = knots_[i];
  const double t = (x - x0) / (x1 - x0);
  return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

KreinString build_string(const ScaleSpeedPair& pair) {
  pair.validate();
  const std::size_t n = pair.n();
  std::vector<Atom> atoms(n + 1);
  // Compensated prefix sums x_k = sum_{j<=k} U(j); strings can reach 1e6
  // atoms and naive sums drift.
  double sum = 0.0, comp = 0.0;
  atoms[0] = Atom{0.0, pair.H(0)};
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = pair.U(k);
    const double t = sum + x;
    if (sum >= x)
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
    atoms[k] = Atom{sum + comp, pair.H(k)};
  }
  const double ell = atoms.back().position;
  return KreinString(0.0, ell, std::move(atoms));
}

PiecewiseLinearFunction lift(const ScaleSpeedPair& pair,
                             const std::vector<double>& f) {
  if (f.size() != pair.n() + 1)
    throw ContractViolation("lift: f must have n+1 entries");
  KreinString s = build_string(pair);
  std::vector<double> knots;
  knots.reserve(s.size());
  for (const Atom& a : s.atoms())
    knots.push_back(a.position);
  return PiecewiseLinearFunction(std::move(knots), f);
}

KreinString restrict_string(const KreinString& s, double a, double b) {
  if (!(s.left() <= a && a < b && b <= s.right()))
    throw DomainError("restriction interval must satisfy left <= a < b <= "
                      "right");
  std::vector<Atom> kept;
  for (const Atom& atom : s.atoms()) {
    if (atom.position == a || atom.position == b)
      throw CutPointCollision("atom at restriction cut point " +
                                  std::to_string(atom.position),
                              atom.position);
    if (atom.position > a && atom.position < b)
      kept.push_back(atom);
  }
  return KreinString(a, b, std::move(kept));
}

KreinString rescale(const KreinString& s, double gamma, double beta) {
  if (!(gamma > 0.0) || !(beta > 0.0))
    throw DomainError("rescale needs gamma > 0 and beta > 0");
  const double weight_factor = std::pow(gamma, 1.0 / beta);
  std::vector<Atom> atoms;
  atoms.reserve(s.size());
  for (const Atom& a : s.atoms())
    atoms.push_back(Atom{a.position * gamma, a.weight * weight_factor});
  return KreinString(s.left() * gamma, s.right() * gamma, std::move(atoms));
}

void StepFunction::validate() const {
  if (!(horizon > 0.0))
    throw DomainError("step function horizon must be positive");
  double prev = 0.0;
  for (const Atom& j : jumps) {
    if (!(j.position > prev) || j.position > horizon)
      throw DomainError("jump positions must be strictly increasing in "
                        "(0, T]");
    if (!(j.weight > 0.0))
      throw DomainError("jump sizes must be positive");
    prev = j.position;
  }
}

double StepFunction::value(double t) const {
  double sum = 0.0;
  for (const Atom& j : jumps) {
    if (j.position > t)
      break;
    sum += j.weight;
  }
  return sum;
}

KreinString generalized_inverse(const StepFunction& m) {
  m.validate();
  if (m.jumps.empty())
    throw DegenerateInput("generalized_inverse: step function has no jumps");

  const std::size_t k = m.jumps.size();
  std::vector<Atom> atoms;
  atoms.reserve(k + 1);

  // Plateau [0, u_1) -> weight u_1 at level 0.
  atoms.push_back(Atom{0.0, m.jumps.front().position});
  // Plateau [u_i, u_{i+1}) -> weight u_{i+1} - u_i at level m(u_i).
  double level = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    level += m.jumps[i].weight;
    const double w = m.jumps[i + 1].position - m.jumps[i].position;
    if (w > 0.0)
      atoms.push_back(Atom{level, w});
  }
  // Final plateau [u_k, T] -> weight T - u_k at level m(T).
  level += m.jumps.back().weight;
  const double w_last = m.horizon - m.jumps.back().position;
  if (w_last > 0.0)
    atoms.push_back(Atom{level, w_last});

  return KreinString(0.0, level, std::move(atoms));
}

} // namespace spectring
