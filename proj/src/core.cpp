#include "mml/core.hpp"

#include <cmath>
#include <cstdlib>

namespace mml {

int dimension_cap() {
  const char* env = std::getenv("MML_DIM_CAP");
  if (env != nullptr) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1'000'000) {
      return static_cast<int>(v);
    }
  }
  return 4096;
}

void require_level(int n) {
  if (n < 0) throw SizeError("level N must be nonnegative, got " + std::to_string(n));
  const int cap = dimension_cap();
  if (n > cap) {
    throw SizeError("level N=" + std::to_string(n) + " exceeds dimension cap " +
                    std::to_string(cap));
  }
}

double DiagonalMatrix::trace() const {
  double s = 0.0;
  for (double d : diag) s += d;
  return s;
}

ComplexMatrix ComplexMatrix::identity(int dim) {
  ComplexMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix product: dimension mismatch");
  const int n = a.dim();
  ComplexMatrix c(n);
  // i-k-j order; the inner update is spelled out on the components so the
  // compiler does not route every product through the Annex-G helper call.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const cplx av = a(i, k);
      const double ar = av.real(), ai = av.imag();
      if (ar == 0.0 && ai == 0.0) continue;  // exact-zero factor contributes nothing
      for (int j = 0; j < n; ++j) {
        const cplx bv = b(k, j);
        cplx& cv = c(i, j);
        cv = cplx(cv.real() + ar * bv.real() - ai * bv.imag(),
                  cv.imag() + ar * bv.imag() + ai * bv.real());
      }
    }
  }
  return c;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix sum: dimension mismatch");
  ComplexMatrix c = a;
  for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("matrix difference: dimension mismatch");
  ComplexMatrix c = a;
  for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  const int n = m.dim();
  ComplexMatrix r(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = std::conj(m(j, i));
  return r;
}

ComplexMatrix scale(const ComplexMatrix& m, cplx factor) {
  ComplexMatrix r = m;
  const double fr = factor.real(), fi = factor.imag();
  for (cplx& v : r.data()) {
    v = cplx(fr * v.real() - fi * v.imag(), fr * v.imag() + fi * v.real());
  }
  return r;
}

cplx trace(const ComplexMatrix& m) {
  cplx s = 0.0;
  for (int i = 0; i < m.dim(); ++i) s += m(i, i);
  return s;
}

double max_abs(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const cplx& v : m.data()) mx = std::max(mx, std::abs(v));
  return mx;
}

double max_abs_imag(const ComplexMatrix& m) {
  double mx = 0.0;
  for (const cplx& v : m.data()) mx = std::max(mx, std::abs(v.imag()));
  return mx;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  const int n = m.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

ComplexMatrix to_dense(const SymTridiag& t) {
  const int n = t.dim();
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = t.diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = t.offdiag[i];
    m(i + 1, i) = t.offdiag[i];
  }
  return m;
}

ComplexMatrix to_dense(const DiagonalMatrix& d) {
  const int n = d.dim();
  ComplexMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = d.diag[i];
  return m;
}

std::vector<cplx> apply(const ComplexMatrix& m, const std::vector<cplx>& v) {
  if (static_cast<int>(v.size()) != m.dim())
    throw DimensionMismatch("matrix apply: dimension mismatch");
  const int n = m.dim();
  std::vector<cplx> y(v.size(), cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < n; ++j) {
      const cplx a = m(i, j);
      re += a.real() * v[j].real() - a.imag() * v[j].imag();
      im += a.real() * v[j].imag() + a.imag() * v[j].real();
    }
    y[i] = cplx(re, im);
  }
  return y;
}

std::vector<cplx> apply(const SymTridiag& t, const std::vector<cplx>& v) {
  if (static_cast<int>(v.size()) != t.dim())
    throw DimensionMismatch("tridiagonal apply: dimension mismatch");
  const int n = t.dim();
  std::vector<cplx> y(v.size());
  for (int i = 0; i < n; ++i) {
    cplx s = t.diag[i] * v[i];
    if (i > 0) s += t.offdiag[i - 1] * v[i - 1];
    if (i + 1 < n) s += t.offdiag[i] * v[i + 1];
    y[i] = s;
  }
  return y;
}

cplx ModalMatrix::centry(int r, int c) const {
  const double v = entry(r, c);
  if (!decorated()) return cplx(v, 0.0);
  switch (r & 3) {  // i^r cycles 1, i, -1, -i
    case 0: return cplx(v, 0.0);
    case 1: return cplx(0.0, v);
    case 2: return cplx(-v, 0.0);
    default: return cplx(0.0, -v);
  }
}

ComplexMatrix to_complex(const ModalMatrix& m) {
  ComplexMatrix r(m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) r(i, j) = m.centry(i, j);
  return r;
}

double orthonormality_defect(const ModalMatrix& m) {
  // The i^r column phases drop out of every inner product, so the real
  // storage can be checked directly for the decorated case as well.
  const int n = m.dim;
  double mx = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double s = 0.0;
      for (int r = 0; r < n; ++r) s += m.entry(r, a) * m.entry(r, b);
      const double target = (a == b) ? 1.0 : 0.0;
      mx = std::max(mx, std::abs(s - target));
    }
  }
  return mx;
}

void Spectrum::require_strictly_ascending(double min_gap) const {
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] - values[i] > min_gap)) {
      throw StructureError("spectrum has a near-tie at index " + std::to_string(i) +
                           ": gap " + std::to_string(values[i + 1] - values[i]));
    }
  }
}

CheckResult make_check(std::string name, int n, double max_abs_err, double tol,
                       double runtime_ms) {
  CheckResult r;
  r.name = std::move(name);
  r.n = n;
  r.max_abs_err = max_abs_err;
  r.tol = tol;
  r.pass = max_abs_err <= tol;
  r.runtime_ms = runtime_ms;
  return r;
}

}  // namespace mml
