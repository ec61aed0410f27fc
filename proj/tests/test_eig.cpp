#include <doctest.h>

#include <cmath>

#include "mml/eig.hpp"
#include "mml/hermite.hpp"
#include "mml/operators.hpp"

using namespace mml;

TEST_SUITE("eig") {

TEST_CASE("level 1 closed form") {
  eig::EigResult r = eig::eigh_tridiagonal(ops::build_position(1));
  REQUIRE(r.spectrum.size() == 2);
  CHECK(r.spectrum.values[0] == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-14));
  CHECK(r.spectrum.values[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  // Columns are sign-free; magnitudes are 1/sqrt 2 and the low column has
  // opposite-sign components.
  const double c = std::sqrt(0.5);
  CHECK(std::abs(std::abs(r.vectors.entry(0, 0)) - c) < 1e-14);
  CHECK(std::abs(std::abs(r.vectors.entry(1, 0)) - c) < 1e-14);
  CHECK(r.vectors.entry(0, 0) * r.vectors.entry(1, 0) < 0.0);
  CHECK(r.vectors.entry(0, 1) * r.vectors.entry(1, 1) > 0.0);
}

TEST_CASE("level 3 closed form") {
  const double inner = std::sqrt((3.0 - std::sqrt(6.0)) / 2.0);
  const double outer = std::sqrt((3.0 + std::sqrt(6.0)) / 2.0);
  eig::EigResult r = eig::eigh_tridiagonal(ops::build_position(3));
  REQUIRE(r.spectrum.size() == 4);
  CHECK(r.spectrum.values[0] == doctest::Approx(-outer).epsilon(1e-13));
  CHECK(r.spectrum.values[1] == doctest::Approx(-inner).epsilon(1e-13));
  CHECK(r.spectrum.values[2] == doctest::Approx(inner).epsilon(1e-13));
  CHECK(r.spectrum.values[3] == doctest::Approx(outer).epsilon(1e-13));
}

TEST_CASE("solver agrees with the polynomial zeros oracle") {
  const int n = 40;
  eig::EigResult r = eig::eigh_tridiagonal(ops::build_position(n));
  Spectrum oracle = hermite::hermite_zeros_oracle(n + 1);
  REQUIRE(r.spectrum.size() == oracle.size());
  for (int l = 0; l <= n; ++l) {
    const double lam = r.spectrum.values[static_cast<size_t>(l)];
    const double x = oracle.values[static_cast<size_t>(l)];
    CHECK(std::abs(lam - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("residual and orthonormality contracts") {
  SymTridiag q = ops::build_position(60);
  eig::EigResult r = eig::eigh_tridiagonal(q);
  CHECK(r.residual <= eig::residual_tolerance(q));
  CHECK(orthonormality_defect(r.vectors) <= 1e-12);
}

TEST_CASE("already-diagonal input with repeated values is accepted") {
  SymTridiag t(3);
  t.diag = {2.0, 2.0, 2.0};
  eig::EigResult r = eig::eigh_tridiagonal(t);
  for (double v : r.spectrum.values) CHECK(v == 2.0);
  CHECK(r.residual == 0.0);
}

TEST_CASE("already-diagonal input is sorted with permuted columns") {
  SymTridiag t(3);
  t.diag = {3.0, 1.0, 2.0};
  eig::EigResult r = eig::eigh_tridiagonal(t);
  CHECK(r.spectrum.values[0] == 1.0);
  CHECK(r.spectrum.values[1] == 2.0);
  CHECK(r.spectrum.values[2] == 3.0);
  CHECK(r.vectors.entry(1, 0) * r.vectors.entry(1, 0) == 1.0);
  CHECK(r.vectors.entry(2, 1) * r.vectors.entry(2, 1) == 1.0);
  CHECK(r.vectors.entry(0, 2) * r.vectors.entry(0, 2) == 1.0);
}

TEST_CASE("momentum eigensystem shares the position spectrum") {
  eig::EigResult p = eig::eigh_momentum(5);
  eig::EigResult q = eig::eigh_tridiagonal(ops::build_position(5));
  REQUIRE(p.spectrum.size() == q.spectrum.size());
  for (int l = 0; l < p.spectrum.size(); ++l)
    CHECK(p.spectrum.values[static_cast<size_t>(l)] ==
          q.spectrum.values[static_cast<size_t>(l)]);
  CHECK(p.vectors.decorated());
}

TEST_CASE("unit-phase similarity is exact in floating point") {
  CHECK(eig::phase_similarity_defect(60) == 0.0);
  CHECK(eig::phase_similarity_defect(3) == 0.0);
}

TEST_CASE("shape validation") {
  SymTridiag bad;
  bad.diag = {1.0, 2.0};
  bad.offdiag = {};
  CHECK_THROWS_AS(eig::eigh_tridiagonal(bad), DimensionMismatch);
  SymTridiag empty;
  CHECK_THROWS_AS(eig::eigh_tridiagonal(empty), SizeError);
}

TEST_CASE("determinism: identical input, identical bits") {
  eig::EigResult a = eig::eigh_tridiagonal(ops::build_position(33));
  eig::EigResult b = eig::eigh_tridiagonal(ops::build_position(33));
  CHECK(a.spectrum.values == b.spectrum.values);
  CHECK(a.vectors.entries == b.vectors.entries);
}

}  // TEST_SUITE
