#include "mml/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::eig {

namespace {

void validate_shape(const SymTridiag& t) {
  if (t.dim() < 1) throw SizeError("eigh_tridiagonal: empty matrix");
  if (t.dim() > dimension_cap() + 1) {
    throw SizeError("eigh_tridiagonal: dimension " + std::to_string(t.dim()) +
                    " exceeds cap + 1");
  }
  if (t.offdiag.size() + 1 != t.diag.size()) {
    throw DimensionMismatch("eigh_tridiagonal: offdiag length must be dim - 1");
  }
}

double matrix_scale(const SymTridiag& t) {
  double s = 0.0;
  for (double v : t.diag) s = std::max(s, std::abs(v));
  for (double v : t.offdiag) s = std::max(s, std::abs(v));
  return s;
}

// max_l ||T u_l - lambda_l u_l||_2 over the produced columns.
double max_residual(const SymTridiag& t, const std::vector<double>& lam,
                    const ModalMatrix& v) {
  const int n = t.dim();
  double worst = 0.0;
  for (int l = 0; l < n; ++l) {
    double ss = 0.0;
    for (int j = 0; j < n; ++j) {
      double r = (t.diag[j] - lam[static_cast<size_t>(l)]) * v.entry(j, l);
      if (j > 0) r += t.offdiag[static_cast<size_t>(j) - 1] * v.entry(j - 1, l);
      if (j + 1 < n) r += t.offdiag[static_cast<size_t>(j)] * v.entry(j + 1, l);
      ss += r * r;
    }
    worst = std::max(worst, std::sqrt(ss));
  }
  return worst;
}

}  // namespace

double residual_tolerance(const SymTridiag& t) {
  return report::eig_residual_factor * static_cast<double>(t.dim()) * matrix_scale(t);
}

EigResult eigh_tridiagonal(const SymTridiag& t) {
  validate_shape(t);
  const int n = t.dim();
  const double eps = std::numeric_limits<double>::epsilon();

  std::vector<double> d = t.diag;
  std::vector<double> e = t.offdiag;  // e[i] couples i and i+1
  e.push_back(0.0);

  ModalMatrix v(n, Convention::Raw);
  for (int i = 0; i < n; ++i) v.entry(i, i) = 1.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      // First negligible coupling at or above l; the block [l..m] is active.
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > report::eig_sweep_budget) {
        throw ConvergenceError("eigh_tridiagonal: eigenvalue " + std::to_string(l) +
                               " not isolated after " +
                               std::to_string(report::eig_sweep_budget) +
                               " sweeps, coupling " + std::to_string(e[l]));
      }

      // Wilkinson shift from the leading 2x2 of the active block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));

      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          // Rotation annihilated early; drop the shift remainder and restart.
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < n; ++k) {
          f = v.entry(k, i + 1);
          v.entry(k, i + 1) = s * v.entry(k, i) + c * f;
          v.entry(k, i) = c * v.entry(k, i) - s * f;
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  // Ascending order; stable on exact ties so the result is reproducible.
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&d](int a, int b) { return d[static_cast<size_t>(a)] < d[static_cast<size_t>(b)]; });

  EigResult out;
  out.spectrum.values.resize(static_cast<size_t>(n));
  out.vectors = ModalMatrix(n, Convention::Raw);
  for (int l = 0; l < n; ++l) {
    out.spectrum.values[static_cast<size_t>(l)] = d[static_cast<size_t>(idx[static_cast<size_t>(l)])];
    for (int k = 0; k < n; ++k) {
      out.vectors.entry(k, l) = v.entry(k, idx[static_cast<size_t>(l)]);
    }
  }

  out.residual = max_residual(t, out.spectrum.values, out.vectors);
  const double tol = residual_tolerance(t);
  if (out.residual > tol) {
    throw ConvergenceError("eigh_tridiagonal: residual " + std::to_string(out.residual) +
                           " exceeds bound " + std::to_string(tol));
  }
  return out;
}

EigResult eigh_momentum(int n) {
  require_level(n);
  EigResult base = eigh_tridiagonal(ops::build_position(n));
  base.vectors.convention = Convention::PhaseDecorated;

  // Verify the decorated columns against the momentum matrix elements:
  // (P v)_j = i (w_{j-1} v_{j-1} - w_j v_{j+1}) with v_j = i^j u_j.
  const int dim = n + 1;
  double worst = 0.0;
  std::vector<cplx> col(static_cast<size_t>(dim));
  for (int l = 0; l < dim; ++l) {
    for (int j = 0; j < dim; ++j) col[static_cast<size_t>(j)] = base.vectors.centry(j, l);
    const double lam = base.spectrum.values[static_cast<size_t>(l)];
    double ss = 0.0;
    for (int j = 0; j < dim; ++j) {
      cplx r = -lam * col[static_cast<size_t>(j)];
      if (j > 0) r += cplx(0.0, ops::coupling(j - 1)) * col[static_cast<size_t>(j) - 1];
      if (j + 1 < dim) r += cplx(0.0, -ops::coupling(j)) * col[static_cast<size_t>(j) + 1];
      ss += std::norm(r);
    }
    worst = std::max(worst, std::sqrt(ss));
  }
  const double tol = residual_tolerance(ops::build_position(n));
  if (worst > tol) {
    throw ConvergenceError("eigh_momentum: residual " + std::to_string(worst) +
                           " exceeds bound " + std::to_string(tol));
  }
  base.residual = worst;
  return base;
}

double phase_similarity_defect(int n) {
  require_level(n);
  const ComplexMatrix p = ops::build_momentum(n);
  const ComplexMatrix q = to_dense(ops::build_position(n));
  const int dim = n + 1;
  // (Phi^dag P Phi)[j,k] = conj(i^j) P[j,k] i^k = P[j,k] * i^(k-j)
  static const cplx unit[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  double worst = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const cplx phase = unit[((k - j) % 4 + 4) % 4];
      const cplx pv = p(j, k);
      // multiply by a unit phase exactly (components swap/negate only)
      const cplx rotated(phase.real() * pv.real() - phase.imag() * pv.imag(),
                         phase.real() * pv.imag() + phase.imag() * pv.real());
      worst = std::max(worst, std::abs(rotated - q(j, k)));
    }
  }
  return worst;
}

}  // namespace mml::eig
