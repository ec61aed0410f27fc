#include "mml/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "mml/actiondiff.hpp"
#include "mml/modal.hpp"
#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::fixtures {

double ExactValue::realize() const {
  if (den == 0) throw StructureError("fixture value has a zero denominator");
  if (root < 0) throw StructureError("fixture value has a negative radicand");
  return (static_cast<double>(num) / static_cast<double>(den)) *
         std::sqrt(static_cast<double>(root));
}

std::string default_fixture_dir() {
  if (const char* env = std::getenv("MML_FIXTURE_DIR"); env && *env) return env;
  return "fixtures";
}

namespace {

ExactValue read_triple(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3)
    throw StructureError("fixture values must be [num, den, root] integer triples");
  ExactValue v;
  v.num = j[0].get<long long>();
  v.den = j[1].get<long long>();
  v.root = j[2].get<long long>();
  return v;
}

std::vector<double> read_triples(const nlohmann::json& a) {
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& e : a) out.push_back(read_triple(e).realize());
  return out;
}

}  // namespace

GoldenFixture load_fixture(const std::string& name, const std::string& dir) {
  const std::string path = dir + "/" + name + ".json";
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open fixture file " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_object() || j.value("schema", std::string()) != "mml-matrix/1")
    throw StructureError("fixture " + path + " does not declare schema mml-matrix/1");

  GoldenFixture f;
  f.name = name;
  f.kind = j.value("kind", std::string());
  f.n = j.at("n").get<int>();
  f.dim = j.at("dim").get<int>();
  const nlohmann::json& exact = j.at("exact");

  if (f.kind == "tridiagonal") {
    f.diag = read_triples(exact.at("diag"));
    f.offdiag = read_triples(exact.at("offdiag"));
    if (static_cast<int>(f.diag.size()) != f.dim ||
        static_cast<int>(f.offdiag.size()) != f.dim - 1)
      throw StructureError("fixture " + path + " field lengths disagree with dim");
  } else if (f.kind == "diagonal") {
    f.diag = read_triples(exact.at("diag"));
    if (static_cast<int>(f.diag.size()) != f.dim)
      throw StructureError("fixture " + path + " field lengths disagree with dim");
  } else if (f.kind == "dense") {
    const nlohmann::json& entries = exact.at("entries");
    if (static_cast<int>(entries.size()) != f.dim * f.dim)
      throw StructureError("fixture " + path + " entry count disagrees with dim");
    f.entries.reserve(entries.size());
    for (const auto& pair : entries) {
      if (!pair.is_array() || pair.size() != 2)
        throw StructureError("fixture dense entries must be [re, im] triple pairs");
      f.entries.emplace_back(read_triple(pair[0]).realize(), read_triple(pair[1]).realize());
    }
  } else {
    throw StructureError("fixture " + path + " has unsupported kind '" + f.kind + "'");
  }
  return f;
}

namespace {

CheckResult finish(const std::string& check_name, int n, double err) {
  return make_check(check_name, n, err, report::tolerance_for(check_name, n + 1));
}

}  // namespace

CheckResult compare_to_fixture(const SymTridiag& t, const GoldenFixture& f,
                               const std::string& check_name) {
  if (f.kind != "tridiagonal") throw StructureError("fixture " + f.name + " is not tridiagonal");
  if (t.dim() != f.dim) throw DimensionMismatch("fixture " + f.name + " dimension mismatch");
  double err = 0.0;
  for (int i = 0; i < f.dim; ++i) err = std::max(err, std::abs(t.diag[i] - f.diag[i]));
  for (int i = 0; i + 1 < f.dim; ++i) err = std::max(err, std::abs(t.offdiag[i] - f.offdiag[i]));
  return finish(check_name, f.n, err);
}

CheckResult compare_to_fixture(const DiagonalMatrix& d, const GoldenFixture& f,
                               const std::string& check_name) {
  if (f.kind != "diagonal") throw StructureError("fixture " + f.name + " is not diagonal");
  if (d.dim() != f.dim) throw DimensionMismatch("fixture " + f.name + " dimension mismatch");
  double err = 0.0;
  for (int i = 0; i < f.dim; ++i) err = std::max(err, std::abs(d.diag[i] - f.diag[i]));
  return finish(check_name, f.n, err);
}

CheckResult compare_to_fixture(const ComplexMatrix& m, const GoldenFixture& f,
                               const std::string& check_name) {
  if (f.kind != "dense") throw StructureError("fixture " + f.name + " is not dense");
  if (m.dim() != f.dim) throw DimensionMismatch("fixture " + f.name + " dimension mismatch");
  double err = 0.0;
  for (int r = 0; r < f.dim; ++r)
    for (int c = 0; c < f.dim; ++c) {
      cplx d = m(r, c) - f.entries[static_cast<std::size_t>(r) * f.dim + c];
      err = std::max(err, std::max(std::abs(d.real()), std::abs(d.imag())));
    }
  return finish(check_name, f.n, err);
}

std::vector<CheckResult> golden_suite(const std::string& dir) {
  std::vector<CheckResult> out;
  out.push_back(compare_to_fixture(ops::build_position(3), load_fixture("q3", dir), "golden_q3"));
  out.push_back(compare_to_fixture(ops::build_momentum(3), load_fixture("p3", dir), "golden_p3"));
  out.push_back(
      compare_to_fixture(ops::build_action_difference(3), load_fixture("d3", dir), "golden_d3"));
  out.push_back(
      compare_to_fixture(ops::build_hamiltonian(3), load_fixture("h3", dir), "golden_h3"));
  ModalMatrix u = modal::modal_position(3);
  ComplexMatrix dq = actiondiff::transform(ops::build_action_difference(3), u);
  out.push_back(compare_to_fixture(dq, load_fixture("dq3", dir), "golden_dq3"));
  return out;
}

}  // namespace mml::fixtures
