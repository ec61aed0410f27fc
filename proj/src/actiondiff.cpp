#include "mml/actiondiff.hpp"

#include <cmath>
#include <string>

#include "mml/modal.hpp"
#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::actiondiff {

namespace {

double identity_minus_allones_entry(int j, int k) { return (j == k ? 1.0 : 0.0) - 1.0; }

}  // namespace

ComplexMatrix transform(const DiagonalMatrix& d, const ModalMatrix& m) {
  if (d.dim() != m.dim) throw DimensionMismatch("transform: dimension mismatch");
  const int n = m.dim;

  if (m.decorated()) {
    const ComplexMatrix mc = to_complex(m);
    return adjoint(mc) * (to_dense(d) * mc);
  }

  // Real congruence U^T (D U).
  std::vector<double> w(static_cast<size_t>(n) * static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      w[static_cast<size_t>(r) * n + c] = d.diag[static_cast<size_t>(r)] * m.entry(r, c);
    }
  }
  ComplexMatrix out(n);
  std::vector<double> acc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      const double ui = m.entry(r, i);
      if (ui == 0.0) continue;
      const double* wrow = &w[static_cast<size_t>(r) * n];
      for (int j = 0; j < n; ++j) acc[static_cast<size_t>(j)] += ui * wrow[j];
    }
    for (int j = 0; j < n; ++j) out(i, j) = acc[static_cast<size_t>(j)];
  }
  return out;
}

CheckResult check_identity_minus_allones(const ComplexMatrix& dq) {
  const int dim = dq.dim();
  double err = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      err = std::max(err, std::abs(dq(j, k) - identity_minus_allones_entry(j, k)));
    }
  }
  return make_check("action_position_identity", dim - 1, err,
                    report::tolerance_for("action_position_identity", dim));
}

ComplexMatrix momentum_in_position_basis(const ModalMatrix& u) {
  if (u.decorated()) {
    throw StructureError("momentum_in_position_basis expects the real position system");
  }
  const int n = u.dim;
  // P = i A with A real antisymmetric tridiagonal; U^dag P U = i U^T (A U),
  // entirely real arithmetic with the same rounding as the dense product.
  std::vector<double> w(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      if (r > 0) v += ops::coupling(r - 1) * u.entry(r - 1, c);
      if (r + 1 < n) v -= ops::coupling(r) * u.entry(r + 1, c);
      w[static_cast<size_t>(r) * n + c] = v;
    }
  }
  ComplexMatrix out(n);
  std::vector<double> acc(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int r = 0; r < n; ++r) {
      const double ui = u.entry(r, i);
      if (ui == 0.0) continue;
      const double* wrow = &w[static_cast<size_t>(r) * n];
      for (int j = 0; j < n; ++j) acc[static_cast<size_t>(j)] += ui * wrow[j];
    }
    for (int j = 0; j < n; ++j) out(i, j) = cplx(0.0, acc[static_cast<size_t>(j)]);
  }
  return out;
}

ComplexMatrix momentum_in_position_basis(int n) {
  require_level(n);
  return momentum_in_position_basis(modal::modal_position(n));
}

KernelMatrix cauchy_hilbert_kernel(const Spectrum& nodes) {
  const int dim = nodes.size();
  if (dim < 1) throw SizeError("cauchy_hilbert_kernel: empty node set");
  for (int j = 0; j + 1 < dim; ++j) {
    const double gap = nodes.values[static_cast<size_t>(j) + 1] - nodes.values[static_cast<size_t>(j)];
    if (!(gap > report::node_spacing_min)) {
      throw SingularityError("cauchy_hilbert_kernel: node spacing " + std::to_string(gap) +
                             " at index " + std::to_string(j) + " is below the guard");
    }
  }
  KernelMatrix k;
  k.dim = dim;
  k.nodes = nodes;
  k.entries = ComplexMatrix(dim);
  for (int j = 0; j < dim; ++j) {
    for (int l = j + 1; l < dim; ++l) {
      const double v = 1.0 / (nodes.values[static_cast<size_t>(l)] - nodes.values[static_cast<size_t>(j)]);
      k.entries(j, l) = cplx(0.0, v);
      k.entries(l, j) = cplx(0.0, -v);  // exact negation: antisymmetric by construction
    }
  }
  return k;
}

ComplexMatrix solve_momentum_elementwise(const ComplexMatrix& dq, const Spectrum& nodes) {
  const int dim = dq.dim();
  if (nodes.size() != dim) {
    throw DimensionMismatch("solve_momentum_elementwise: node count mismatch");
  }
  for (int j = 0; j < dim; ++j) {
    if (std::abs(dq(j, j)) > report::elementwise_diag_tol) {
      throw SingularityError(
          "solve_momentum_elementwise: transformed action difference has diagonal entry " +
          std::to_string(std::abs(dq(j, j))) + " at index " + std::to_string(j) +
          "; the commutator equation has no finite solution there");
    }
  }
  ComplexMatrix p(dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      if (j == k) continue;
      const double spacing = nodes.values[static_cast<size_t>(j)] - nodes.values[static_cast<size_t>(k)];
      if (std::abs(spacing) < report::node_spacing_min) {
        throw SingularityError("solve_momentum_elementwise: node spacing below the guard");
      }
      const cplx num(-dq(j, k).imag(), dq(j, k).real());  // i * Dq[j,k], exact rotation
      p(j, k) = cplx(num.real() / spacing, num.imag() / spacing);
    }
  }
  return p;
}

CheckResult kernel_match(const ComplexMatrix& pq, const KernelMatrix& kernel) {
  if (pq.dim() != kernel.dim) throw DimensionMismatch("kernel_match: dimension mismatch");
  const int dim = pq.dim();
  double err = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      err = std::max(err, std::abs(pq(j, k) - kernel.entries(j, k)));
    }
  }
  return make_check("kernel_match", dim - 1, err,
                    report::tolerance_for("kernel_match", dim));
}

CheckResult kernel_match(int n) {
  require_level(n);
  const modal::ModalPair pos = modal::modal_position_full(n);
  const ComplexMatrix pq = momentum_in_position_basis(pos.vectors);
  return kernel_match(pq, cauchy_hilbert_kernel(pos.spectrum));
}

CheckResult kernel_diagonal(const ComplexMatrix& pq) {
  const int dim = pq.dim();
  double err = 0.0;
  for (int j = 0; j < dim; ++j) err = std::max(err, std::abs(pq(j, j)));
  return make_check("kernel_diagonal", dim - 1, err,
                    report::tolerance_for("kernel_diagonal", dim));
}

CheckResult commutator_reconstruction(const ComplexMatrix& pq, const Spectrum& nodes) {
  const int dim = pq.dim();
  if (nodes.size() != dim) {
    throw DimensionMismatch("commutator_reconstruction: node count mismatch");
  }
  // (Lambda P - P Lambda)[j,k] = x_j P[j,k] - P[j,k] x_k, target i(I-J).
  double err = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const cplx v = pq(j, k);
      const double xj = nodes.values[static_cast<size_t>(j)];
      const double xk = nodes.values[static_cast<size_t>(k)];
      const cplx lhs(xj * v.real() - v.real() * xk, xj * v.imag() - v.imag() * xk);
      const cplx want = (j == k) ? cplx(0.0, 0.0) : cplx(0.0, -1.0);
      err = std::max(err, std::abs(lhs - want));
    }
  }
  return make_check("commutator_reconstruction", dim - 1, err,
                    report::tolerance_for("commutator_reconstruction", dim));
}

CheckResult momentum_basis_structure(int n) {
  require_level(n);
  const modal::ModalPair mom = modal::modal_momentum(n);
  const ComplexMatrix dq = transform(ops::build_action_difference(n), mom.vectors);
  const int dim = n + 1;
  double err = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      err = std::max(err, std::abs(dq(j, k) - identity_minus_allones_entry(j, k)));
    }
  }
  return make_check("momentum_basis_structure", n, err,
                    report::tolerance_for("momentum_basis_structure", dim));
}

}  // namespace mml::actiondiff
