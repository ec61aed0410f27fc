#pragma once

// The action difference [Q,P]/i in transformed bases.
//
// In the position eigenbasis the diagonal (1,...,1,-N) turns into I - J
// (J the all-ones matrix): the truncation defect spreads evenly over the
// modal basis.  Solving the commutator equation elementwise then gives the
// momentum matrix in that basis the closed Cauchy form
//
//   P(q)[j,k] = i / (x_k - x_j)   (j != k),   0 on the diagonal,
//
// with x the position eigenvalues.  The elementwise solve refuses a
// transformed action difference with a nonzero diagonal: the continuum
// answer to that (a delta-derivative kernel) has no finite counterpart.

#include "mml/core.hpp"

namespace mml::actiondiff {

// M^dag D M.  Real congruence for plain columns; the i^row decoration is
// conjugated honestly for decorated systems.
ComplexMatrix transform(const DiagonalMatrix& d, const ModalMatrix& m);

// max |Dq - (I - J)| as a named check.
CheckResult check_identity_minus_allones(const ComplexMatrix& dq);

// U^dag P U for the sign-fixed position system (computed or supplied).
ComplexMatrix momentum_in_position_basis(int n);
ComplexMatrix momentum_in_position_basis(const ModalMatrix& u);

struct KernelMatrix {
  int dim = 0;
  ComplexMatrix entries;
  Spectrum nodes;
};

// Closed-form antisymmetric Cauchy kernel on strictly ascending nodes.
KernelMatrix cauchy_hilbert_kernel(const Spectrum& nodes);

// Elementwise solve of (Lambda P - P Lambda) = i Dq for P; SingularityError
// when Dq carries a nonzero diagonal or nodes nearly collide.
ComplexMatrix solve_momentum_elementwise(const ComplexMatrix& dq, const Spectrum& nodes);

// max |U^dag P U - kernel| as a named check.
CheckResult kernel_match(int n);
CheckResult kernel_match(const ComplexMatrix& pq, const KernelMatrix& kernel);

// max diagonal magnitude of the transformed momentum.
CheckResult kernel_diagonal(const ComplexMatrix& pq);

// max |Lambda Pq - Pq Lambda - i(I-J)| with Lambda = diag(nodes).
CheckResult commutator_reconstruction(const ComplexMatrix& pq, const Spectrum& nodes);

// max |V^dag D V - (I - J)| for the decorated momentum system.
CheckResult momentum_basis_structure(int n);

}  // namespace mml::actiondiff
