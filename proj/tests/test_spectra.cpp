#include <doctest.h>

#include <cmath>

#include "mml/eig.hpp"
#include "mml/operators.hpp"
#include "mml/spectra.hpp"
#include "mml/states.hpp"

using namespace mml;

TEST_SUITE("spectra") {

TEST_CASE("gap statistics on a hand spectrum") {
  Spectrum s;
  s.values = {-2.0, -1.0, -0.25, 0.5, 3.0};
  spectra::GapStats g = spectra::gap_statistics(s, 1.0);
  CHECK(g.count_inside == 3);
  CHECK(g.max_gap == 0.75);
  CHECK(g.mean_gap == 0.75);
  CHECK(g.window_lo == -1.0);
  CHECK(g.window_hi == 1.0);
}

TEST_CASE("gap statistics input validation") {
  Spectrum s;
  s.values = {-2.0, 3.0};
  CHECK_THROWS_AS(spectra::gap_statistics(s, 1.0), StructureError);
  CHECK_THROWS_AS(spectra::gap_statistics(s, 0.0), SizeError);
  CHECK_THROWS_AS(spectra::gap_statistics(s, -2.0), SizeError);
}

TEST_CASE("maximum inner gap shrinks with the level") {
  double prev = 1e300;
  for (int n : {20, 40, 80}) {
    Spectrum s = eig::eigh_tridiagonal(ops::build_position(n)).spectrum;
    spectra::GapStats g = spectra::gap_statistics(s, 1.0);
    CHECK(g.max_gap < prev);
    prev = g.max_gap;
  }
}

TEST_CASE("anomaly closed form") {
  spectra::Anomaly a3 = spectra::hamiltonian_anomaly(3);
  CHECK(a3.value == 1.5);
  CHECK(a3.weight == 0.25);
  spectra::Anomaly a2 = spectra::hamiltonian_anomaly(2);
  CHECK(a2.value == 1.0);
  CHECK(a2.weight == 1.0 / 3.0);
  spectra::Anomaly a10 = spectra::hamiltonian_anomaly(10);
  CHECK(a10.value == 5.0);
  CHECK(a10.weight == 1.0 / 11.0);

  CheckResult c = spectra::hamiltonian_anomaly_check(50);
  CHECK(c.pass);
  CHECK(c.max_abs_err == 0.0);
}

TEST_CASE("resolvent solve leaves a tiny residual") {
  const int n = 6;
  const cplx z(0.3, 0.8);
  std::vector<cplx> rhs(n + 1, cplx(0, 0));
  rhs[0] = cplx(1, 0);
  std::vector<cplx> x = spectra::resolvent_apply(n, z, rhs);
  SymTridiag q = ops::build_position(n);
  std::vector<cplx> qx = apply(q, x);
  double worst = 0.0;
  for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(qx[k] - z * x[k] - rhs[k]));
  CHECK(worst <= 1e-13);
}

TEST_CASE("resolvent solve with pivoting engaged") {
  // A small imaginary shift leaves near-zero pivots on the diagonal, forcing
  // row swaps; the residual contract must still hold.
  const int n = 12;
  const cplx z(0.0, 1e-3);
  std::vector<cplx> rhs(n + 1, cplx(0.25, -0.5));
  std::vector<cplx> x = spectra::resolvent_apply(n, z, rhs);
  SymTridiag q = ops::build_position(n);
  std::vector<cplx> qx = apply(q, x);
  double worst = 0.0, scale = 0.0;
  for (int k = 0; k <= n; ++k) {
    worst = std::max(worst, std::abs(qx[k] - z * x[k] - rhs[k]));
    scale = std::max(scale, std::abs(x[k]));
  }
  CHECK(worst <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("resolvent differences shrink in Cauchy fashion") {
  states::StateVector e0 = states::number_state(0, 0);
  spectra::ResolventDiag d1 = spectra::resolvent_cauchy(cplx(0, 1), e0, 25, 50);
  spectra::ResolventDiag d2 = spectra::resolvent_cauchy(cplx(0, 1), e0, 50, 100);
  CHECK(d1.diff_norm > 0.0);
  CHECK(d2.diff_norm > 0.0);
  CHECK(d2.diff_norm < d1.diff_norm);
}

TEST_CASE("resolvent input validation") {
  states::StateVector e0 = states::number_state(0, 0);
  CHECK_THROWS_AS(spectra::resolvent_cauchy(cplx(0.7, 0.0), e0, 10, 20), SingularityError);
  CHECK_THROWS_AS(spectra::resolvent_cauchy(cplx(0, 1), e0, 20, 20), SizeError);
  states::StateVector big = states::number_state(0, 30);
  CHECK_THROWS_AS(spectra::resolvent_cauchy(cplx(0, 1), big, 10, 20), DimensionMismatch);
  std::vector<cplx> short_rhs(3, cplx(1, 0));
  CHECK_THROWS_AS(spectra::resolvent_apply(6, cplx(0, 1), short_rhs), DimensionMismatch);
}

}  // TEST_SUITE
