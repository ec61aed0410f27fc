#include "mml/modal.hpp"

#include <cmath>
#include <string>

#include "mml/eig.hpp"
#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::modal {

ModalMatrix orient_last_component_positive(const ModalMatrix& raw) {
  ModalMatrix u = raw;
  const int n = u.dim;
  for (int l = 0; l < n; ++l) {
    const double last = u.entry(n - 1, l);
    if (std::abs(last) < report::orient_epsilon) {
      throw StructureError("orient: column " + std::to_string(l) +
                           " has vanishing last component, cannot fix sign");
    }
    if (last < 0.0) {
      for (int k = 0; k < n; ++k) u.entry(k, l) = -u.entry(k, l);
    }
  }
  u.convention = Convention::LastComponentPositive;
  return u;
}

ModalPair modal_position_full(int n) {
  require_level(n);
  eig::EigResult r = eig::eigh_tridiagonal(ops::build_position(n));
  double scale = 1.0;
  for (double v : r.spectrum.values) scale = std::max(scale, std::abs(v));
  r.spectrum.require_strictly_ascending(report::near_tie_factor * scale);

  ModalPair out;
  out.spectrum = std::move(r.spectrum);
  out.vectors = orient_last_component_positive(r.vectors);
  out.residual = r.residual;
  return out;
}

ModalMatrix modal_position(int n) { return modal_position_full(n).vectors; }

CheckResult check_constant_last_row(const ModalMatrix& u) {
  if (u.convention != Convention::LastComponentPositive) {
    throw StructureError("constant last row check needs last-component-positive columns");
  }
  const int dim = u.dim;
  const double want = 1.0 / std::sqrt(static_cast<double>(dim));
  double err = 0.0;
  for (int l = 0; l < dim; ++l) {
    err = std::max(err, std::abs(u.entry(dim - 1, l) - want));
  }
  return make_check("last_row_constant", dim - 1, err,
                    report::tolerance_for("last_row_constant", dim));
}

ModalMatrix kocher_rotation(int n) {
  require_level(n);
  if (n < 1) throw SizeError("kocher_rotation: needs level N >= 1");
  const int dim = n + 1;
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  const double bulk = (s - 1.0) / static_cast<double>(n);

  ModalMatrix r(dim, Convention::Rotation);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) r.entry(j, k) = (j == k ? 1.0 : 0.0) + bulk;
    r.entry(j, n) = -s;
  }
  for (int k = 0; k < n; ++k) r.entry(n, k) = s;
  r.entry(n, n) = s;  // 1 + (s - 1)
  return r;
}

CheckResult kocher_orthogonality(const ModalMatrix& r) {
  if (r.convention != Convention::Rotation) {
    throw StructureError("kocher orthogonality check expects a rotation block");
  }
  return make_check("kocher_orthogonality", r.dim - 1, orthonormality_defect(r),
                    report::tolerance_for("kocher_orthogonality", r.dim));
}

CheckResult kocher_diagonal_map(const ModalMatrix& r) {
  if (r.convention != Convention::Rotation) {
    throw StructureError("kocher diagonal map check expects a rotation block");
  }
  const int dim = r.dim;
  const double mu = 1.0 / std::sqrt(static_cast<double>(dim));
  double ss = 0.0;
  for (int j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (int k = 0; k < dim; ++k) acc += r.entry(j, k) * mu;
    const double want = (j == dim - 1) ? 1.0 : 0.0;
    ss += (acc - want) * (acc - want);
  }
  return make_check("kocher_diagonal_map", dim - 1, std::sqrt(ss),
                    report::tolerance_for("kocher_diagonal_map", dim));
}

BlockFactorResult block_factor(const ModalMatrix& u, const ModalMatrix& r) {
  if (u.dim != r.dim) throw DimensionMismatch("block_factor: dimension mismatch");
  if (u.convention != Convention::LastComponentPositive) {
    throw StructureError("block_factor: modal system must be sign-fixed");
  }
  if (r.convention != Convention::Rotation) {
    throw StructureError("block_factor: second factor must be a rotation block");
  }
  const int dim = u.dim;

  BlockFactorResult out;
  out.block = ModalMatrix(dim, Convention::Rotation);
  // B = U R^T
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k) acc += u.entry(i, k) * r.entry(j, k);
      out.block.entry(i, j) = acc;
    }
  }

  double struct_err = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double want_row = (j == dim - 1) ? 1.0 : 0.0;
    struct_err = std::max(struct_err, std::abs(out.block.entry(dim - 1, j) - want_row));
    struct_err = std::max(struct_err, std::abs(out.block.entry(j, dim - 1) - want_row));
  }
  out.structure = make_check("block_structure", dim - 1, struct_err,
                             report::tolerance_for("block_structure", dim));

  // Upper (dim-1) x (dim-1) block against orthogonality.
  double orth_err = 0.0;
  for (int a = 0; a + 1 < dim; ++a) {
    for (int b = a; b + 1 < dim; ++b) {
      double acc = 0.0;
      for (int k = 0; k + 1 < dim; ++k) acc += out.block.entry(k, a) * out.block.entry(k, b);
      const double want = (a == b) ? 1.0 : 0.0;
      orth_err = std::max(orth_err, std::abs(acc - want));
    }
  }
  out.orthogonality = make_check("block_orthogonality", dim - 1, orth_err,
                                 report::tolerance_for("block_orthogonality", dim));
  return out;
}

ModalPair modal_momentum(int n) {
  ModalPair pos = modal_position_full(n);
  pos.vectors.convention = Convention::PhaseDecorated;

  const int dim = n + 1;
  double worst = 0.0;
  std::vector<cplx> col(static_cast<size_t>(dim));
  for (int l = 0; l < dim; ++l) {
    for (int j = 0; j < dim; ++j) col[static_cast<size_t>(j)] = pos.vectors.centry(j, l);
    const double lam = pos.spectrum.values[static_cast<size_t>(l)];
    double ss = 0.0;
    for (int j = 0; j < dim; ++j) {
      cplx rr = -lam * col[static_cast<size_t>(j)];
      if (j > 0) rr += cplx(0.0, ops::coupling(j - 1)) * col[static_cast<size_t>(j) - 1];
      if (j + 1 < dim) rr += cplx(0.0, -ops::coupling(j)) * col[static_cast<size_t>(j) + 1];
      ss += std::norm(rr);
    }
    worst = std::max(worst, std::sqrt(ss));
  }
  const double tol = eig::residual_tolerance(ops::build_position(n));
  if (worst > tol) {
    throw ConvergenceError("modal_momentum: residual " + std::to_string(worst) +
                           " exceeds bound " + std::to_string(tol));
  }
  pos.residual = worst;
  return pos;
}

}  // namespace mml::modal
