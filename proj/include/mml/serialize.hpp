#pragma once

// On-disk formats.
//
// Matrices travel as "mml-matrix/1" JSON objects.  Every real number is
// serialized as its shortest round-trip decimal string, so reimporting
// reproduces the exact bit pattern; complex entries are [re, im] string
// pairs.  CSV output is for spreadsheets and plotting, prints 17 significant
// digits, and makes no round-trip promise.

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mml/actiondiff.hpp"
#include "mml/core.hpp"

namespace mml::report {

// Shortest decimal string that parses back to the same double.
// Throws StructureError for NaN or infinity.
std::string format_double(double v);

// Inverse of format_double; the whole string must be consumed.
double parse_double(std::string_view s);

// mml-matrix/1 writers.  "n" is the truncation level; dim is n + 1 except for
// kernels, which record their own dimension.
nlohmann::json matrix_json(const SymTridiag& t, int n);
nlohmann::json matrix_json(const DiagonalMatrix& d, int n);
nlohmann::json matrix_json(const ComplexMatrix& m, int n);
nlohmann::json matrix_json(const ModalMatrix& u, int n);
nlohmann::json kernel_json(const actiondiff::KernelMatrix& k, int n);
nlohmann::json spectrum_json(const Spectrum& s, int n);

// Parsed mml-matrix/1 payload, numbers realized back into doubles.
struct MatrixFile {
  std::string kind;
  int n = 0;
  int dim = 0;
  std::vector<double> diag, offdiag;   // tridiagonal / diagonal kinds
  std::vector<cplx> entries;           // dense kind, row-major
  std::vector<double> real_entries;    // modal kind, row-major
  Convention convention = Convention::Raw;
  std::vector<double> values;          // spectrum kind
  std::vector<double> nodes;           // kernel kind
};

MatrixFile parse_matrix_json(const nlohmann::json& j);

SymTridiag tridiagonal_from(const MatrixFile& f);
DiagonalMatrix diagonal_from(const MatrixFile& f);
ComplexMatrix dense_from(const MatrixFile& f);
ModalMatrix modal_from(const MatrixFile& f);
Spectrum spectrum_from(const MatrixFile& f);
actiondiff::KernelMatrix kernel_from(const MatrixFile& f);

std::string convention_name(Convention c);
Convention convention_from_name(std::string_view s);

// CSV emitters (17 significant digits, lossy).
void write_csv(std::ostream& out, const SymTridiag& t);
void write_csv(std::ostream& out, const DiagonalMatrix& d);
void write_csv(std::ostream& out, const ComplexMatrix& m);
void write_csv(std::ostream& out, const ModalMatrix& u);
void write_csv(std::ostream& out, const Spectrum& s);
void write_csv(std::ostream& out, const actiondiff::KernelMatrix& k);

}  // namespace mml::report
