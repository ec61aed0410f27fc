#include <doctest.h>

#include <cmath>

#include "mml/operators.hpp"
#include "mml/states.hpp"

using namespace mml;

TEST_SUITE("states") {

TEST_CASE("number states have exact moments") {
  states::StateVector e2 = states::number_state(2, 5);
  REQUIRE(e2.dim() == 6);
  CHECK(e2.coeffs[2] == cplx(1.0, 0.0));
  CHECK(e2.norm_deviation == 0.0);
  CHECK(states::expectation(ops::build_hamiltonian(5), e2) == 2.5);
  CHECK(states::expectation(ops::build_action_difference(5), e2) == 1.0);

  states::UncertaintyReport r = states::uncertainty_check(e2, 5);
  // dq = dp = sqrt(k + 1/2), so the margin above |<D>|/2 is exactly k.
  CHECK(r.margin == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("ground state saturates the bound") {
  states::StateVector g = states::number_state(0, 5);
  states::UncertaintyReport r = states::uncertainty_check(g, 5);
  CHECK(std::abs(r.product - 0.5) <= 1e-14);
  CHECK(std::abs(r.bound - 0.5) <= 1e-14);
  CHECK(std::abs(r.margin) <= 1e-14);
}

TEST_CASE("top state sees the truncation in its mean") {
  const int n = 4;
  states::StateVector top = states::number_state(n, n);
  CHECK(states::expectation(ops::build_action_difference(n), top) == -4.0);
  states::UncertaintyReport r = states::uncertainty_check(top, n);
  CHECK(r.bound == doctest::Approx(2.0).epsilon(1e-14));
  // dq^2 = dp^2 = N/2 for the top state, so the product meets N/2 exactly.
  CHECK(std::abs(r.margin) <= 1e-13);
}

TEST_CASE("coherent state at converged truncation") {
  states::StateVector psi = states::coherent_state(cplx(1.0, 0.0), 60);
  states::UncertaintyReport r = states::uncertainty_check(psi, 60);
  CHECK(r.mean_q == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(r.mean_p) <= 1e-12);
  CHECK(r.mean_h == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(std::abs(r.product - 0.5) <= 1e-8);
  CHECK(std::abs(r.mean_d - 1.0) <= 1e-12);
  CHECK(std::abs(r.margin) <= 1e-10);
}

TEST_CASE("coherent state with a complex parameter") {
  const cplx alpha(0.4, -0.9);
  states::StateVector psi = states::coherent_state(alpha, 70);
  states::UncertaintyReport r = states::uncertainty_check(psi, 70);
  CHECK(r.mean_q == doctest::Approx(std::sqrt(2.0) * alpha.real()).epsilon(1e-10));
  CHECK(r.mean_p == doctest::Approx(std::sqrt(2.0) * alpha.imag()).epsilon(1e-10));
}

TEST_CASE("divergent truncation throws, lenient variant flags") {
  CHECK_THROWS_AS(states::coherent_state(cplx(3.0, 0.0), 20), TruncationError);
  states::CoherentTruncation ct = states::coherent_state_lenient(cplx(3.0, 0.0), 20);
  CHECK_FALSE(ct.converged);
  CHECK(ct.tail_weight > 1e-6);
  CHECK(ct.state.dim() == 21);
}

TEST_CASE("discarded tail weight matches the hand value") {
  // alpha = 1, N = 10: sum_{k>=11} e^{-1}/k! = 1.0048e-8.
  states::CoherentTruncation ct = states::coherent_state_lenient(cplx(1.0, 0.0), 10);
  CHECK(ct.converged);
  CHECK(ct.tail_weight == doctest::Approx(1.0048e-8).epsilon(1e-3));
}

TEST_CASE("action mean sweep tracks the tail") {
  // Levels kept low enough that (N+1)|a_N|^2 stays above one ulp of 1;
  // past N ~ 15 the deviation underflows the working precision entirely.
  std::vector<states::ActionMeanRow> rows =
      states::action_mean_sweep(cplx(1.0, 0.0), {10, 12, 14});
  REQUIRE(rows.size() == 3);
  // deviation = (N+1)|a_N|^2; for alpha = 1, N = 10 that is 11 e^{-1}/10!.
  CHECK(rows[0].deviation == doctest::Approx(1.11516e-6).epsilon(1e-3));
  CHECK(rows[1].deviation < rows[0].deviation);
  CHECK(rows[2].deviation < rows[1].deviation);
  CHECK(rows[2].deviation > 0.0);
  for (const auto& r : rows) CHECK(r.converged);
}

TEST_CASE("random states are deterministic per seed and normalized") {
  std::mt19937_64 rng1(777), rng2(777), rng3(778);
  states::StateVector a = states::random_state(12, rng1);
  states::StateVector b = states::random_state(12, rng2);
  states::StateVector c = states::random_state(12, rng3);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.coeffs != c.coeffs);
  double norm = 0.0;
  for (const cplx& z : a.coeffs) norm += std::norm(z);
  CHECK(std::abs(norm - 1.0) <= 1e-14);
}

TEST_CASE("random states respect the uncertainty bound") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    states::StateVector psi = states::random_state(31, rng);
    states::UncertaintyReport r = states::uncertainty_check(psi, 30);
    CHECK(r.margin >= -1e-10);
  }
}

TEST_CASE("expectation is honest about non-Hermitian input") {
  // Only Hermitian operators are asserted real; a non-Hermitian matrix gets
  // its complex quadratic form back untouched.
  ComplexMatrix m(2);
  m(0, 1) = cplx(1.0, 0.0);
  states::StateVector psi = states::StateVector::from_coeffs({cplx(1, 0), cplx(0, 1)});
  cplx ex = states::expectation(m, psi);
  CHECK(ex.real() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ex.imag() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(states::uncertainty_check(psi, 0), DimensionMismatch);

  // The Hermitian path of the same overload stays real within tolerance.
  ComplexMatrix p = ops::build_momentum(1);
  CHECK(std::abs(states::expectation(p, psi).imag()) <= 1e-12);
}

TEST_CASE("degenerate coefficient vectors are rejected") {
  CHECK_THROWS_AS(states::StateVector::from_coeffs({cplx(0, 0), cplx(0, 0)}),
                  StructureError);
  CHECK_THROWS_AS(states::number_state(7, 5), SizeError);
}

}  // TEST_SUITE
