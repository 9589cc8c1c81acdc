#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "spectring/eigensolver.hpp"
#include "spectring/error.hpp"
#include "spectring/shooting.hpp"
#include "spectring/string.hpp"
#include "spectring/walk.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace spectring;
using namespace spectring::testing;

namespace {
constexpr double eps = std::numeric_limits<double>::epsilon();

KreinString two_atom_string() {
  return KreinString(0.0, 1.0, {Atom{1.0 / 3.0, 1.0}, Atom{2.0 / 3.0, 1.0}});
}
} // namespace

TEST_CASE("shoot: single-atom psi polynomial") {
  const KreinString s(0.0, 1.0, {Atom{0.5, 1.0}});
  for (double lam : {0.0, 1.0, 2.5, 4.0, 7.0})
    CHECK(shoot_psi(s, lam).value ==
          doctest::Approx(1.0 - lam / 4.0).epsilon(1e-14));
}

TEST_CASE("shoot: two-atom psi polynomial and zeros") {
  const KreinString s = two_atom_string();
  for (double lam : {0.0, 0.5, 3.0, 5.0, 9.0, 12.0}) {
    const double expected = 1.0 - 4.0 * lam / 9.0 + lam * lam / 27.0;
    CHECK(shoot_psi(s, lam).value ==
          doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(std::fabs(shoot_psi(s, 3.0).value) <= 1e-14);
  CHECK(std::fabs(shoot_psi(s, 9.0).value) <= 1e-13);
}

TEST_CASE("shoot: lambda = 0 gives the linear and constant solutions") {
  Rng rng(21);
  for (int rep = 0; rep < 10; ++rep) {
    const KreinString s = bracketing_string(rng);
    const ShootingResult psi = shoot_psi(s, 0.0);
    const ShootingResult phi = shoot_phi(s, 0.0);
    CHECK(psi.value == doctest::Approx(s.length()).epsilon(1e-14));
    CHECK(phi.value == 1.0);
    CHECK(phi.slope == 0.0);
    for (const ShootingState& st : psi.trace)
      CHECK(st.value ==
            doctest::Approx(st.position - s.left()).epsilon(1e-14));
  }
}

TEST_CASE("wronskian is one along the trace") {
  Rng rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    const KreinString s = bracketing_string(rng);
    const double lam = rng.log_uniform(1e-2, 1e2);
    const ShootingResult phi = shoot_phi(s, lam);
    const ShootingResult psi = shoot_psi(s, lam);
    REQUIRE(phi.trace.size() == psi.trace.size());
    for (std::size_t i = 0; i < phi.trace.size(); ++i) {
      const double w = phi.trace[i].value * psi.trace[i].slope -
                       phi.trace[i].slope * psi.trace[i].value;
      // scale-aware: the wronskian subtracts quantities of this size
      const double scale =
          std::fabs(phi.trace[i].value * psi.trace[i].slope) +
          std::fabs(phi.trace[i].slope * psi.trace[i].value) + 1.0;
      CHECK(std::fabs(w - 1.0) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("psi_series: single atom terminates at one level") {
  const KreinString s(0.0, 1.0, {Atom{0.5, 1.0}});
  for (double lam : {0.5, 4.0, 40.0}) {
    const PsiSeries ps = psi_series(s, 1.0, lam, 1);
    CHECK(ps.value == doctest::Approx(1.0 - lam / 4.0).epsilon(1e-14));
    CHECK(ps.tail_bound == 0.0);
  }
}

TEST_CASE("psi_series: lambda = 0") {
  const KreinString s = two_atom_string();
  const PsiSeries ps = psi_series(s, 0.7, 0.0, 0);
  CHECK(ps.value == 0.7);
  CHECK(ps.tail_bound == 0.0);
}

TEST_CASE("psi_series: eigenvalue sits inside the tail bound") {
  const KreinString s = two_atom_string();
  const PsiSeries ps = psi_series(s, 1.0, 3.0, 2);
  // 3 is a Dirichlet eigenvalue, so the true value is 0; with j_max = 2
  // the series is exact here (two atoms)
  CHECK(std::fabs(ps.value) <= ps.tail_bound + 1e-14);
}

TEST_CASE("psi_series agrees with shooting within the tail bound") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const KreinString s = random_string(rng, 1, 20, 1e-2, 1.0);
    for (std::size_t j_max : {std::size_t{2}, std::size_t{5},
                              std::size_t{10}}) {
      for (double lam = 0.0; lam <= 50.0; lam += 10.0) {
        const PsiSeries ps = psi_series(s, s.right(), lam, j_max);
        const double shot = shoot_psi(s, lam).value;
        const double slack = 64 * eps * (1.0 + ps.term_magnitude);
        CHECK(std::fabs(ps.value - shot) <= ps.tail_bound + slack);
      }
    }
  }
}

TEST_CASE("psi_series: degraded flag for hopeless truncation") {
  // large mass far from the right end: strong tail, tiny j_max
  const KreinString s(0.0, 1.0, {Atom{0.1, 50.0}, Atom{0.2, 50.0},
                                 Atom{0.3, 50.0}, Atom{0.4, 50.0}});
  const PsiSeries ps = psi_series(s, 1.0, 40.0, 2);
  CHECK(ps.degraded);
}

TEST_CASE("dirichlet_zeros: hand-checked spectra") {
  const KreinString single(0.0, 1.0, {Atom{0.5, 1.0}});
  const std::vector<double> z1 = dirichlet_zeros(single, 10.0);
  REQUIRE(z1.size() == 1);
  CHECK(z1[0] == doctest::Approx(4.0).epsilon(1e-12));

  const std::vector<double> z2 = dirichlet_zeros(two_atom_string(), 10.0);
  REQUIRE(z2.size() == 2);
  CHECK(z2[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(z2[1] == doctest::Approx(9.0).epsilon(1e-12));

  const KreinString ssrw =
      build_string(decompose_rates(RateField::ssrw(4), 1.0));
  const std::vector<double> z3 = dirichlet_zeros(ssrw, 2.0);
  REQUIRE(z3.size() == 3);
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK(z3[k - 1] ==
          doctest::Approx(1.0 - std::cos(M_PI * static_cast<double>(k) / 4.0))
              .epsilon(1e-12));
}

TEST_CASE("dirichlet_zeros cross-validates the matrix spectrum") {
  Rng rng(24);
  for (int rep = 0; rep < 10; ++rep) {
    const KreinString s = random_string(rng, 1, 60, 1e-1, 1e1);
    const Spectrum spec = eigenvalues(s, BoundaryCondition::dirichlet);
    const double lmax = spec.eigenvalues.back() * 1.01;
    const std::vector<double> zeros = dirichlet_zeros(s, lmax);
    REQUIRE(zeros.size() == spec.eigenvalues.size());
    for (std::size_t i = 0; i < zeros.size(); ++i)
      CHECK(std::fabs(zeros[i] - spec.eigenvalues[i]) <=
            1e-9 * spec.eigenvalues[i]);
  }
}

TEST_CASE("neumann_condition: examples") {
  const KreinString s = two_atom_string();
  CHECK(std::fabs(neumann_condition(s, 6.0)) <= 1e-12);
  CHECK(neumann_condition(s, 0.0) == doctest::Approx(2.0).epsilon(1e-15));

  const KreinString boundary(0.0, 1.0, {Atom{0.0, 1.0}});
  CHECK_THROWS_AS(neumann_condition(boundary, 1.0), UnsupportedConfiguration);
}

TEST_CASE("neumann_zeros cross-validate the matrix spectrum") {
  Rng rng(25);
  for (int rep = 0; rep < 10; ++rep) {
    const KreinString s = random_string(rng, 2, 40, 1e-1, 1e1);
    const Spectrum spec = eigenvalues(s, BoundaryCondition::neumann);
    const double lmax = spec.eigenvalues.back() * 1.01 + 1.0;
    const std::vector<double> zeros = neumann_zeros(s, lmax);
    REQUIRE(zeros.size() + 1 == spec.eigenvalues.size());
    for (std::size_t i = 0; i < zeros.size(); ++i)
      CHECK(std::fabs(zeros[i] - spec.eigenvalues[i + 1]) <=
            1e-9 * spec.eigenvalues[i + 1]);
  }
}

TEST_CASE("shooting psi equals the characteristic polynomial") {
  Rng rng(26);
  for (int rep = 0; rep < 12; ++rep) {
    const KreinString s = random_string(rng, 1, 10, 0.2, 5.0);
    const Pencil p = assemble_pencil(s, BoundaryCondition::dirichlet);
    const std::size_t n = p.dim();

    // normalization: product of the gaps
    double gap_product = s.atoms()[0].position - s.left();
    for (std::size_t i = 0; i + 1 < n; ++i)
      gap_product *= p.positions[i + 1] - p.positions[i];
    gap_product *= s.right() - p.positions[n - 1];

    // sample both polynomials at n+1 Chebyshev nodes; interpolate in the
    // normalized coordinate t in [-1,1], where Newton-to-monomial
    // conversion stays well conditioned
    const double span = 2.0 * (p.k_diag[0] / p.m_diag[0] + 1.0);
    std::vector<double> xs(n + 1), ya(n + 1), yb(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = std::cos(M_PI * static_cast<double>(i) /
                                static_cast<double>(n));
      xs[i] = t;
      const double lam = span * 0.5 * (1.0 + t);
      ya[i] = shoot_psi(s, lam).value;
      yb[i] = gap_product * tridiag_char(p, lam);
    }
    const std::vector<double> ca = interpolate_coefficients(xs, ya);
    const std::vector<double> cb = interpolate_coefficients(xs, yb);
    double cmax = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      cmax = std::max({cmax, std::fabs(ca[i]), std::fabs(cb[i])});
    for (std::size_t i = 0; i <= n; ++i)
      CHECK(std::fabs(ca[i] - cb[i]) <=
            1e-9 * std::max(std::fabs(ca[i]), std::fabs(cb[i])) +
                1e-12 * cmax);
  }
}
