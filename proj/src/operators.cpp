#include "mml/operators.hpp"

#include <cmath>
#include <string>

#include "mml/tolerances.hpp"

namespace mml::ops {

double coupling(int k) { return std::sqrt((static_cast<double>(k) + 1.0) / 2.0); }

SymTridiag build_position(int n) {
  require_level(n);
  SymTridiag q(n + 1);
  for (int k = 0; k < n; ++k) q.offdiag[k] = coupling(k);
  return q;
}

ComplexMatrix build_momentum(int n) {
  require_level(n);
  ComplexMatrix p(n + 1);
  for (int k = 0; k < n; ++k) {
    const double w = coupling(k);
    p(k + 1, k) = cplx(0.0, w);   // raising side
    p(k, k + 1) = cplx(0.0, -w);  // lowering side, exact conjugate
  }
  return p;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

DiagonalMatrix build_action_difference(int n) {
  require_level(n);
  DiagonalMatrix d(n + 1);
  for (int k = 0; k < n; ++k) d.diag[k] = 1.0;
  d.diag[n] = -static_cast<double>(n);

  // Cross-check against the explicit commutator.  [Q,P]/i = -i*[Q,P].
  const ComplexMatrix c =
      scale(commutator(to_dense(build_position(n)), build_momentum(n)), cplx(0.0, -1.0));
  const double tol = report::commutator_assembly_tol(n + 1);
  double err = 0.0;
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      const cplx want = (j == k) ? cplx(d.diag[j], 0.0) : cplx(0.0, 0.0);
      err = std::max(err, std::abs(c(j, k) - want));
    }
  }
  if (err > tol) {
    throw StructureError("action difference: commutator deviates from (1,...,1,-N) by " +
                         std::to_string(err) + " at N=" + std::to_string(n));
  }
  return d;
}

DiagonalMatrix build_hamiltonian(int n) {
  require_level(n);
  DiagonalMatrix h(n + 1);
  for (int k = 0; k < n; ++k) h.diag[k] = static_cast<double>(k) + 0.5;
  h.diag[n] = static_cast<double>(n) / 2.0;  // truncation anomaly

  // Assemble (Q^2 + P^2)/2 explicitly; it must be diagonal and must agree
  // with the closed form above.
  const ComplexMatrix q = to_dense(build_position(n));
  const ComplexMatrix p = build_momentum(n);
  const ComplexMatrix sum = scale(q * q + p * p, cplx(0.5, 0.0));
  const double tol =
      report::hamiltonian_assembly_factor * std::max(1.0, static_cast<double>(n));
  double offdiag_err = 0.0, diag_err = 0.0;
  for (int j = 0; j <= n; ++j) {
    for (int k = 0; k <= n; ++k) {
      if (j == k) {
        diag_err = std::max(diag_err, std::abs(sum(j, j) - cplx(h.diag[j], 0.0)));
      } else {
        offdiag_err = std::max(offdiag_err, std::abs(sum(j, k)));
      }
    }
  }
  if (offdiag_err > tol) {
    throw StructureError("hamiltonian: (Q^2+P^2)/2 has off-diagonal residue " +
                         std::to_string(offdiag_err) + " at N=" + std::to_string(n));
  }
  if (diag_err > tol) {
    throw StructureError("hamiltonian: diagonal deviates from (k+1/2, N/2) by " +
                         std::to_string(diag_err) + " at N=" + std::to_string(n));
  }
  return h;
}

}  // namespace mml::ops
