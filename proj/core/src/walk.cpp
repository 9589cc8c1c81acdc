#include "spectring/walk.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spectring/error.hpp"
#include "spectring/string.hpp"

namespace spectring {

namespace {

void require_positive_finite(double v, const char* what, std::size_t k) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " at site " + std::to_string(k) +
                      " must be positive and finite, got " +
                      std::to_string(v));
  }
}

} // namespace

RateField::RateField(std::size_t n_, double step_, std::vector<double> left_,
                     std::vector<double> right_)
    : n(n_), step(step_), right(std::move(right_)), left(std::move(left_)) {
  validate();
}

void RateField::validate() const {
  if (n < 2)
    throw DomainError("rate field needs n >= 2, got " + std::to_string(n));
  if (!(step > 0.0))
    throw DomainError("lattice step must be positive");
  if (left.size() != n || right.size() != n)
    throw DomainError("rate arrays must have n entries each (left: k=1..n, "
                      "right: k=0..n-1)");
  for (std::size_t k = 1; k <= n; ++k)
    require_positive_finite(left_rate(k), "left rate", k);
  for (std::size_t k = 0; k < n; ++k)
    require_positive_finite(right_rate(k), "right rate", k);
}

RateField RateField::ssrw(std::size_t n, double step) {
  return RateField(n, step, std::vector<double>(n, 0.5),
                   std::vector<double>(n, 0.5));
}

RateField RateField::trap(const std::vector<double>& tau, double step) {
  // Classical trap walk: mean waiting time tau(x), unbiased jump, so
  // c(x, x+-1) = 1/(2 tau(x)).
  if (tau.size() < 3)
    throw DomainError("trap field needs tau at sites 0..n with n >= 2");
  const std::size_t n = tau.size() - 1;
  std::vector<double> left(n), right(n);
  for (std::size_t k = 1; k <= n; ++k)
    left[k - 1] = 0.5 / tau[k];
  for (std::size_t k = 0; k < n; ++k)
    right[k] = 0.5 / tau[k];
  return RateField(n, step, std::move(left), std::move(right));
}

RateField RateField::trap_asymmetric(const std::vector<double>& tau, double a,
                                     double step) {
  if (tau.size() < 3)
    throw DomainError("trap field needs tau at sites 0..n with n >= 2");
  const std::size_t n = tau.size() - 1;
  // The two-parameter trap family c(x, y) = tau(x)^(-1+a) tau(y)^a. At
  // a = 0 and tau == 1 this is rate 1 per direction, twice the SSRW.
  auto rate = [&](std::size_t x, std::size_t y) {
    return std::pow(tau[x], -1.0 + a) * std::pow(tau[y], a);
  };
  std::vector<double> left(n), right(n);
  for (std::size_t k = 1; k <= n; ++k)
    left[k - 1] = rate(k, k - 1);
  for (std::size_t k = 0; k < n; ++k)
    right[k] = rate(k, k + 1);
  return RateField(n, step, std::move(left), std::move(right));
}

RateField RateField::barrier(const std::vector<double>& tau, double step) {
  if (tau.size() < 2)
    throw DomainError("barrier field needs tau on edges 1..n with n >= 2");
  const std::size_t n = tau.size();
  std::vector<double> left(n), right(n);
  for (std::size_t k = 1; k <= n; ++k)
    left[k - 1] = 1.0 / tau[k - 1]; // c(k, k-1) = 1/tau(k)
  for (std::size_t k = 0; k < n; ++k)
    right[k] = 1.0 / tau[k]; // c(k, k+1) = 1/tau(k+1)
  return RateField(n, step, std::move(left), std::move(right));
}

void ScaleSpeedPair::validate() const {
  const std::size_t nn = u.size();
  if (nn < 2 || h.size() != nn + 1)
    throw DomainError("scale/speed pair needs U on 1..n and H on 0..n, n >= 2");
  if (!(gauge > 0.0))
    throw DomainError("gauge must be positive");
  for (std::size_t k = 1; k <= nn; ++k)
    require_positive_finite(U(k), "U", k);
  for (std::size_t k = 0; k <= nn; ++k)
    require_positive_finite(H(k), "H", k);
}

ScaleSpeedPair decompose_rates(const RateField& rates, double gauge) {
  rates.validate();
  if (!(gauge > 0.0) || !std::isfinite(gauge))
    throw DomainError("gauge must be positive and finite");

  const std::size_t n = rates.n;
  ScaleSpeedPair pair;
  pair.gauge = gauge;
  pair.step = rates.step;
  pair.u.resize(n);
  pair.h.resize(n + 1);

  auto range_check = [](double v, const char* what, std::size_t k) {
    if (!std::isfinite(v) || v == 0.0 ||
        std::fabs(v) < std::numeric_limits<double>::min()) {
      throw NumericRangeError(std::string(what) + " recursion left the "
                              "representable range at index " +
                                  std::to_string(k),
                              k);
    }
  };

  // U(1) = gauge, U(k+1) = U(k) c(k,k-1)/c(k,k+1). The recursion is kept
  // in direct space: each step is two roundings, which preserves the
  // 4-ulp compose/decompose round trip.
  pair.u[0] = gauge;
  for (std::size_t k = 1; k < n; ++k) {
    const double next = pair.u[k - 1] * rates.left_rate(k) / rates.right_rate(k);
    range_check(next, "U", k + 1);
    pair.u[k] = next;
  }

  // H(k) = 1/(c(k,k-1) U(k)) for k = 1..n; the boundary value H(0) comes
  // from inverting c(0,1) = 1/(H(0) U(1)).
  pair.h[0] = 1.0 / (rates.right_rate(0) * pair.U(1));
  range_check(pair.h[0], "H", 0);
  for (std::size_t k = 1; k <= n; ++k) {
    pair.h[k] = 1.0 / (rates.left_rate(k) * pair.U(k));
    range_check(pair.h[k], "H", k);
  }
  return pair;
}

RateField compose_rates(const ScaleSpeedPair& pair) {
  pair.validate();
  const std::size_t n = pair.n();
  std::vector<double> left(n), right(n);
  for (std::size_t k = 1; k <= n; ++k)
    left[k - 1] = 1.0 / (pair.H(k) * pair.U(k));
  for (std::size_t k = 0; k < n; ++k)
    right[k] = 1.0 / (pair.H(k) * pair.U(k + 1));
  return RateField(n, pair.step, std::move(left), std::move(right));
}

double dirichlet_form(const ScaleSpeedPair& pair,
                      const std::vector<double>& f) {
  const std::size_t n = pair.n();
  if (f.size() != n + 1)
    throw ContractViolation("dirichlet_form: f must have n+1 entries");
  if (f.front() != 0.0 || f.back() != 0.0)
    throw ContractViolation("dirichlet_form: f must vanish at both endpoints");
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double d = f[j] - f[j - 1];
    sum += d * d / pair.U(j);
  }
  return sum;
}

double rayleigh_quotient(const KreinString& s,
                         const PiecewiseLinearFunction& f) {
  // Energy from the trial function's own knots.
  double energy = 0.0;
  auto knots = f.knots();
  auto values = f.values();
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double gap = knots[i] - knots[i - 1];
    const double d = values[i] - values[i - 1];
    if (gap > 0.0)
      energy += d * d / gap;
  }
  double mass = 0.0;
  for (const Atom& a : s.atoms()) {
    const double v = f(a.position);
    mass += v * v * a.weight;
  }
  if (mass == 0.0)
    throw DegenerateInput("rayleigh_quotient: trial function is "
                          "dm-almost-everywhere zero");
  return energy / mass;
}

} // namespace spectring
