#pragma once

// In-house spectral decomposition for real symmetric tridiagonal matrices:
// implicit-shift QL sweeps with Wilkinson shifts, rotations accumulated into
// the eigenvector matrix.  No external solver is involved anywhere on this
// path; the Newton-on-recurrence zeros oracle lives in a different module
// precisely so the two can disagree.
//
// Guarantees:
//   * eigenvalues ascending, eigenvectors column-aligned, no sign convention
//   * residual max_l ||T u_l - lambda_l u_l||_2 checked against
//     1e-13 * dim * scale (scale = largest matrix element magnitude) before
//     returning; ConvergenceError otherwise
//   * bit-identical output for identical input (sequential, no randomness)

#include "mml/core.hpp"

namespace mml::eig {

struct EigResult {
  Spectrum spectrum;
  ModalMatrix vectors;    // column l pairs with spectrum.values[l]
  double residual = 0.0;  // achieved max residual norm
};

EigResult eigh_tridiagonal(const SymTridiag& t);

// The residual bound eigh_tridiagonal enforces for this matrix.
double residual_tolerance(const SymTridiag& t);

// Spectral decomposition of the momentum matrix at level n through its exact
// unit-phase similarity with the position matrix: columns are i^row-decorated
// position eigenvectors, eigenvalues identical.  The momentum residual is
// re-verified directly against the momentum matrix elements.
EigResult eigh_momentum(int n);

// max |Phi^dag P_N Phi - Q_N| with Phi = diag(i^k); exact up to unit-phase
// arithmetic, so anything above 1e-15 is a construction bug.
double phase_similarity_defect(int n);

}  // namespace mml::eig
