#pragma once

// Golden fixtures.
//
// The level-3 operators have closed-form entries built from square roots of
// small integers, so the fixture files store each value as an integer triple
// [num, den, root] meaning (num/den)*sqrt(root).  Loading realizes the
// triples into doubles; comparisons then run against freshly assembled
// matrices.

#include <string>
#include <vector>

#include "mml/core.hpp"

namespace mml::fixtures {

struct ExactValue {
  long long num = 0;
  long long den = 1;
  long long root = 1;
  double realize() const;
};

struct GoldenFixture {
  std::string name;
  std::string kind;  // tridiagonal | diagonal | dense
  int n = 0;
  int dim = 0;
  std::vector<double> diag, offdiag;  // tridiagonal / diagonal
  std::vector<cplx> entries;          // dense, row-major
};

// MML_FIXTURE_DIR when set, otherwise "fixtures".
std::string default_fixture_dir();

// Reads <dir>/<name>.json.
GoldenFixture load_fixture(const std::string& name, const std::string& dir);

CheckResult compare_to_fixture(const SymTridiag& t, const GoldenFixture& f,
                               const std::string& check_name);
CheckResult compare_to_fixture(const DiagonalMatrix& d, const GoldenFixture& f,
                               const std::string& check_name);
CheckResult compare_to_fixture(const ComplexMatrix& m, const GoldenFixture& f,
                               const std::string& check_name);

// Builds the level-3 operators and the transformed action difference, then
// compares each against its fixture.  Returns one check per fixture.
std::vector<CheckResult> golden_suite(const std::string& dir);

}  // namespace mml::fixtures
