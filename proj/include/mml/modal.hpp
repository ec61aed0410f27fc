#pragma once

// Modal systems of the position and momentum matrices.
//
// The position eigenvectors, once each column's sign is fixed so its last
// component is positive, share a constant last row 1/sqrt(N+1): every
// position eigenstate carries equal weight on the top number state.  That
// constant row is what the explicit rotation R_N straightens: R_N maps the
// normalized all-ones vector to e_N, and U_N factors as B_N R_N with B_N
// carrying e_N as its last row and column.

#include "mml/core.hpp"

namespace mml::modal {

struct ModalPair {
  Spectrum spectrum;
  ModalMatrix vectors;
  double residual = 0.0;
};

// Sign-fix solver columns.  Throws StructureError if some column's last
// component is too small to orient.
ModalMatrix orient_last_component_positive(const ModalMatrix& raw);

// Position eigensystem at level n with the last-component-positive
// convention; asserts the spectrum is simple.
ModalPair modal_position_full(int n);
ModalMatrix modal_position(int n);

// max_l |U[N,l] - 1/sqrt(N+1)| as a named check.
CheckResult check_constant_last_row(const ModalMatrix& u);

// The explicit rotation R_N: identity plus constant blocks
//   (1/sqrt(N+1) - 1)/N   on the upper-left N x N block,
//   -1/sqrt(N+1)          down the last column,
//   +1/sqrt(N+1)          along the last row,
//   1/sqrt(N+1)           in the corner (after adding the identity).
ModalMatrix kocher_rotation(int n);

CheckResult kocher_orthogonality(const ModalMatrix& r);

// ||R mu - e_N||_2 with mu the normalized all-ones vector.
CheckResult kocher_diagonal_map(const ModalMatrix& r);

struct BlockFactorResult {
  ModalMatrix block;  // B = U R^T
  CheckResult structure;      // last row/column of B against e_N
  CheckResult orthogonality;  // upper N x N block against orthogonality
};

BlockFactorResult block_factor(const ModalMatrix& u, const ModalMatrix& r);

// Momentum eigensystem: i^row-decorated sign-fixed position columns,
// residual-checked against the momentum matrix.
ModalPair modal_momentum(int n);

}  // namespace mml::modal
