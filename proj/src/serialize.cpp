#include "mml/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mml::report {

std::string format_double(double v) {
  if (!std::isfinite(v)) throw StructureError("cannot serialize a non-finite value");
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw StructureError("malformed numeric field: '" + std::string(s) + "'");
  return v;
}

namespace {

constexpr const char* kSchema = "mml-matrix/1";

nlohmann::json real_array(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(format_double(x));
  return a;
}

std::vector<double> read_real_array(const nlohmann::json& a, const char* field) {
  if (!a.is_array()) throw StructureError(std::string("matrix field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& e : a) {
    if (!e.is_string()) throw StructureError(std::string("matrix field '") + field + "' must hold strings");
    out.push_back(parse_double(e.get_ref<const std::string&>()));
  }
  return out;
}

nlohmann::json complex_array(const std::vector<cplx>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (const cplx& z : v)
    a.push_back(nlohmann::json::array({format_double(z.real()), format_double(z.imag())}));
  return a;
}

std::vector<cplx> read_complex_array(const nlohmann::json& a, const char* field) {
  if (!a.is_array()) throw StructureError(std::string("matrix field '") + field + "' must be an array");
  std::vector<cplx> out;
  out.reserve(a.size());
  for (const auto& e : a) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
      throw StructureError(std::string("matrix field '") + field + "' entries must be [re, im] string pairs");
    out.emplace_back(parse_double(e[0].get_ref<const std::string&>()),
                     parse_double(e[1].get_ref<const std::string&>()));
  }
  return out;
}

nlohmann::json envelope(const char* kind, int n, int dim) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = kind;
  j["n"] = n;
  j["dim"] = dim;
  return j;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json matrix_json(const SymTridiag& t, int n) {
  nlohmann::json j = envelope("tridiagonal", n, t.dim());
  j["diag"] = real_array(t.diag);
  j["offdiag"] = real_array(t.offdiag);
  return j;
}

nlohmann::json matrix_json(const DiagonalMatrix& d, int n) {
  nlohmann::json j = envelope("diagonal", n, d.dim());
  j["diag"] = real_array(d.diag);
  return j;
}

nlohmann::json matrix_json(const ComplexMatrix& m, int n) {
  nlohmann::json j = envelope("dense", n, m.dim());
  j["entries"] = complex_array(m.data());
  return j;
}

nlohmann::json matrix_json(const ModalMatrix& u, int n) {
  nlohmann::json j = envelope("modal", n, u.dim);
  j["convention"] = convention_name(u.convention);
  j["entries"] = real_array(u.entries);
  return j;
}

nlohmann::json kernel_json(const actiondiff::KernelMatrix& k, int n) {
  nlohmann::json j = envelope("kernel", n, k.dim);
  j["entries"] = complex_array(k.entries.data());
  j["nodes"] = real_array(k.nodes.values);
  return j;
}

nlohmann::json spectrum_json(const Spectrum& s, int n) {
  nlohmann::json j = envelope("spectrum", n, static_cast<int>(s.size()));
  j["values"] = real_array(s.values);
  return j;
}

MatrixFile parse_matrix_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StructureError("matrix file must be a JSON object");
  if (!j.contains("schema") || j["schema"] != kSchema)
    throw StructureError("matrix file does not declare schema mml-matrix/1");
  MatrixFile f;
  f.kind = j.value("kind", std::string());
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw StructureError("matrix file is missing integer field 'n'");
  f.n = j["n"].get<int>();
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw StructureError("matrix file is missing integer field 'dim'");
  f.dim = j["dim"].get<int>();
  if (f.dim <= 0) throw StructureError("matrix file declares a non-positive dimension");

  if (f.kind == "tridiagonal") {
    f.diag = read_real_array(j.at("diag"), "diag");
    f.offdiag = read_real_array(j.at("offdiag"), "offdiag");
    if (static_cast<int>(f.diag.size()) != f.dim ||
        static_cast<int>(f.offdiag.size()) != f.dim - 1)
      throw StructureError("tridiagonal field lengths disagree with dim");
  } else if (f.kind == "diagonal") {
    f.diag = read_real_array(j.at("diag"), "diag");
    if (static_cast<int>(f.diag.size()) != f.dim)
      throw StructureError("diagonal field length disagrees with dim");
  } else if (f.kind == "dense") {
    f.entries = read_complex_array(j.at("entries"), "entries");
    if (f.entries.size() != static_cast<std::size_t>(f.dim) * f.dim)
      throw StructureError("dense entry count disagrees with dim");
  } else if (f.kind == "modal") {
    f.real_entries = read_real_array(j.at("entries"), "entries");
    if (f.real_entries.size() != static_cast<std::size_t>(f.dim) * f.dim)
      throw StructureError("modal entry count disagrees with dim");
    f.convention = convention_from_name(j.value("convention", std::string("raw")));
  } else if (f.kind == "kernel") {
    f.entries = read_complex_array(j.at("entries"), "entries");
    f.nodes = read_real_array(j.at("nodes"), "nodes");
    if (f.entries.size() != static_cast<std::size_t>(f.dim) * f.dim ||
        static_cast<int>(f.nodes.size()) != f.dim)
      throw StructureError("kernel field lengths disagree with dim");
  } else if (f.kind == "spectrum") {
    f.values = read_real_array(j.at("values"), "values");
    if (static_cast<int>(f.values.size()) != f.dim)
      throw StructureError("spectrum length disagrees with dim");
  } else {
    throw StructureError("unknown matrix kind '" + f.kind + "'");
  }
  return f;
}

SymTridiag tridiagonal_from(const MatrixFile& f) {
  if (f.kind != "tridiagonal") throw StructureError("matrix file is not tridiagonal");
  SymTridiag t;
  t.diag = f.diag;
  t.offdiag = f.offdiag;
  return t;
}

DiagonalMatrix diagonal_from(const MatrixFile& f) {
  if (f.kind != "diagonal") throw StructureError("matrix file is not diagonal");
  DiagonalMatrix d;
  d.diag = f.diag;
  return d;
}

ComplexMatrix dense_from(const MatrixFile& f) {
  if (f.kind != "dense") throw StructureError("matrix file is not dense");
  ComplexMatrix m(f.dim);
  for (int r = 0; r < f.dim; ++r)
    for (int c = 0; c < f.dim; ++c)
      m(r, c) = f.entries[static_cast<std::size_t>(r) * f.dim + c];
  return m;
}

ModalMatrix modal_from(const MatrixFile& f) {
  if (f.kind != "modal") throw StructureError("matrix file is not modal");
  ModalMatrix u;
  u.dim = f.dim;
  u.entries = f.real_entries;
  u.convention = f.convention;
  return u;
}

Spectrum spectrum_from(const MatrixFile& f) {
  if (f.kind != "spectrum") throw StructureError("matrix file is not a spectrum");
  Spectrum s;
  s.values = f.values;
  return s;
}

actiondiff::KernelMatrix kernel_from(const MatrixFile& f) {
  if (f.kind != "kernel") throw StructureError("matrix file is not a kernel");
  actiondiff::KernelMatrix k;
  k.dim = f.dim;
  k.entries = ComplexMatrix(f.dim);
  k.entries.data() = f.entries;
  k.nodes.values = f.nodes;
  return k;
}

std::string convention_name(Convention c) {
  switch (c) {
    case Convention::Raw: return "raw";
    case Convention::LastComponentPositive: return "last_component_positive";
    case Convention::PhaseDecorated: return "phase_decorated";
    case Convention::Rotation: return "rotation";
  }
  throw StructureError("unknown modal convention");
}

Convention convention_from_name(std::string_view s) {
  if (s == "raw") return Convention::Raw;
  if (s == "last_component_positive") return Convention::LastComponentPositive;
  if (s == "phase_decorated") return Convention::PhaseDecorated;
  if (s == "rotation") return Convention::Rotation;
  throw StructureError("unknown modal convention '" + std::string(s) + "'");
}

void write_csv(std::ostream& out, const SymTridiag& t) {
  out << "index,diag,offdiag\n";
  for (int i = 0; i < t.dim(); ++i) {
    out << i << ',' << fmt17(t.diag[i]) << ',';
    if (i + 1 < t.dim()) out << fmt17(t.offdiag[i]);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const DiagonalMatrix& d) {
  out << "index,value\n";
  for (int i = 0; i < d.dim(); ++i) out << i << ',' << fmt17(d.diag[i]) << '\n';
}

void write_csv(std::ostream& out, const ComplexMatrix& m) {
  out << "row,col,re,im\n";
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c) {
      const cplx& z = m(r, c);
      out << r << ',' << c << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
    }
}

void write_csv(std::ostream& out, const ModalMatrix& u) {
  out << "row,col,value\n";
  for (int r = 0; r < u.dim; ++r)
    for (int c = 0; c < u.dim; ++c) out << r << ',' << c << ',' << fmt17(u.entry(r, c)) << '\n';
}

void write_csv(std::ostream& out, const Spectrum& s) {
  out << "index,value\n";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    out << i << ',' << fmt17(s.values[i]) << '\n';
}

void write_csv(std::ostream& out, const actiondiff::KernelMatrix& k) {
  out << "row,col,re,im\n";
  for (int r = 0; r < k.dim; ++r)
    for (int c = 0; c < k.dim; ++c) {
      const cplx& z = k.entries(r, c);
      out << r << ',' << c << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
    }
}

}  // namespace mml::report
