#pragma once

// Shared domain types for the matrix mechanics lab: tridiagonal / diagonal /
// dense complex matrices on the (N+1)-dimensional number basis, spectra, and
// the check-result record every verification path reports through.
//
// Convention used throughout: N is the truncation level, the matrices act on
// basis states indexed 0..N, so every dimension below is N+1.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mml {

using cplx = std::complex<double>;

inline constexpr const char* tool_name = "mml";
inline constexpr const char* tool_version = "0.1.0";

// ── Error categories ────────────────────────────────────────────────────────

// Level/dimension out of range (negative N, cap exceeded, bad index).
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two objects that must share a dimension do not.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural identity that must hold by construction failed.
class StructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iteration exhausted its budget or a residual target was missed.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Division by a vanishing spacing or pivot.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A state cannot be represented at the requested truncation level.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ── Truncation level bounds ─────────────────────────────────────────────────

// Maximum admissible level N.  Defaults to 4096; the MML_DIM_CAP environment
// variable overrides it (positive integers only, junk is ignored).
int dimension_cap();

// Throws SizeError unless 0 <= n <= dimension_cap().
void require_level(int n);

// ── Matrix containers ───────────────────────────────────────────────────────

// Real symmetric tridiagonal matrix.  offdiag[k] couples indices k and k+1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;

  SymTridiag() = default;
  explicit SymTridiag(int dim)
      : diag(static_cast<size_t>(dim), 0.0),
        offdiag(dim > 0 ? static_cast<size_t>(dim - 1) : 0, 0.0) {
    if (dim <= 0) throw SizeError("SymTridiag: dimension must be positive");
  }

  int dim() const { return static_cast<int>(diag.size()); }
};

// Real diagonal matrix.
struct DiagonalMatrix {
  std::vector<double> diag;

  DiagonalMatrix() = default;
  explicit DiagonalMatrix(int dim) : diag(static_cast<size_t>(dim), 0.0) {
    if (dim <= 0) throw SizeError("DiagonalMatrix: dimension must be positive");
  }

  int dim() const { return static_cast<int>(diag.size()); }
  double trace() const;
};

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int dim)
      : dim_(dim), a_(static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
    if (dim <= 0) throw SizeError("ComplexMatrix: dimension must be positive");
  }

  static ComplexMatrix identity(int dim);

  int dim() const { return dim_; }
  cplx& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
  const cplx& operator()(int r, int c) const {
    return a_[static_cast<size_t>(r) * dim_ + c];
  }
  std::vector<cplx>& data() { return a_; }
  const std::vector<cplx>& data() const { return a_; }

 private:
  int dim_ = 0;
  std::vector<cplx> a_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix adjoint(const ComplexMatrix& m);
ComplexMatrix scale(const ComplexMatrix& m, cplx factor);
cplx trace(const ComplexMatrix& m);

// Largest entry modulus / largest imaginary part magnitude.
double max_abs(const ComplexMatrix& m);
double max_abs_imag(const ComplexMatrix& m);

// max |m - adjoint(m)| <= tol, entrywise modulus.
bool is_hermitian(const ComplexMatrix& m, double tol);

ComplexMatrix to_dense(const SymTridiag& t);
ComplexMatrix to_dense(const DiagonalMatrix& d);

std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v);
std::vector<cplx> apply(const SymTridiag& t, const std::vector<cplx>& v);

// ── Modal matrices ──────────────────────────────────────────────────────────

// Sign/phase convention attached to a set of basis columns.
//  Raw                   solver output, no convention imposed
//  LastComponentPositive every column's last entry made positive
//  PhaseDecorated        entry(r,c) carries an extra i^r phase
//  Rotation              orthogonal basis-change block (no sign convention)
enum class Convention { Raw, LastComponentPositive, PhaseDecorated, Rotation };

// Orthonormal column system.  Storage is real; the phase-decorated case is a
// diagonal unit-phase twist of a real system, so a complex entry accessor is
// enough to materialize it.
struct ModalMatrix {
  int dim = 0;
  std::vector<double> entries;  // row-major, column l = l-th basis vector
  Convention convention = Convention::Raw;

  ModalMatrix() = default;
  ModalMatrix(int d, Convention conv)
      : dim(d),
        entries(static_cast<size_t>(d) * static_cast<size_t>(d), 0.0),
        convention(conv) {
    if (d <= 0) throw SizeError("ModalMatrix: dimension must be positive");
  }

  double entry(int r, int c) const {
    return entries[static_cast<size_t>(r) * dim + c];
  }
  double& entry(int r, int c) {
    return entries[static_cast<size_t>(r) * dim + c];
  }

  bool decorated() const { return convention == Convention::PhaseDecorated; }

  // i^r * entry(r,c) when decorated, plain entry otherwise.
  cplx centry(int r, int c) const;
};

ComplexMatrix to_complex(const ModalMatrix& m);

// max entrywise deviation of m^dagger * m from the identity.
double orthonormality_defect(const ModalMatrix& m);

// ── Spectra and check records ───────────────────────────────────────────────

struct Spectrum {
  std::vector<double> values;  // ascending

  int size() const { return static_cast<int>(values.size()); }

  // Near-ties are a solver failure wherever simple spectra are guaranteed
  // (zeros of orthogonal polynomials are simple).  Throws StructureError if
  // two consecutive values are closer than min_gap.
  void require_strictly_ascending(double min_gap) const;
};

struct CheckResult {
  std::string name;
  int n = 0;
  double max_abs_err = 0.0;
  double tol = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
};

CheckResult make_check(std::string name, int n, double max_abs_err, double tol,
                       double runtime_ms = 0.0);

}  // namespace mml
