#pragma once

// Canonical operator matrices on the truncated number basis |0>..|N>.
//
// Matrix elements (hbar = 1):
//   Q[j,k] = (sqrt(k+1) d_{j,k+1} + sqrt(k) d_{j,k-1}) / sqrt(2)
//   P[j,k] = i (sqrt(k+1) d_{j,k+1} - sqrt(k) d_{j,k-1}) / sqrt(2)
// so Q is real symmetric tridiagonal with zero diagonal and
// offdiag[k] = sqrt((k+1)/2), and P = i*A with A real antisymmetric carrying
// the same magnitudes.
//
// The commutator [Q,P]/i is diagonal: 1 at indices 0..N-1 and -N at index N
// (equivalently I - (N+1) e_N e_N^T), the truncation artifact that replaces
// the canonical commutation relation at finite dimension.  (Q^2+P^2)/2 is
// diagonal with entries k+1/2 for k < N and the anomalous N/2 at k = N.

#include "mml/core.hpp"

namespace mml::ops {

// offdiag[k] = sqrt((k+1)/2), the single coupling sequence everything shares.
double coupling(int k);

SymTridiag build_position(int n);
ComplexMatrix build_momentum(int n);

// Exact diagonal (1,...,1,-N); construction cross-checks the explicit
// commutator [Q,P]/i against it and throws StructureError on disagreement.
DiagonalMatrix build_action_difference(int n);

// Exact diagonal (1/2, 3/2, ..., N-1/2, N/2); construction cross-checks the
// explicit product (Q^2+P^2)/2 and throws StructureError on disagreement.
DiagonalMatrix build_hamiltonian(int n);

// a*b - b*a.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace mml::ops
