#pragma once

// Central tolerance registry.  Every named check resolves its tolerance here,
// so no comparison threshold is scattered through the modules, and a check
// name appears exactly once.  Tolerances either stay constant or grow
// linearly with the matrix dimension (rotation roundoff accumulates ~dim*eps).

#include <map>
#include <string>

namespace mml::report {

enum class Scaling { Constant, LinearInDim };

struct Tolerance {
  double base = 0.0;
  Scaling scaling = Scaling::Constant;

  double at(int dim) const {
    return scaling == Scaling::LinearInDim ? base * static_cast<double>(dim) : base;
  }
};

// name -> tolerance rule, one entry per check used anywhere in the tool.
const std::map<std::string, Tolerance>& tolerance_registry();

// Throws std::out_of_range on unknown names: a misspelled check is a bug.
double tolerance_for(const std::string& name, int dim);
bool known_check(const std::string& name);

// ── Construction-time assertion scales (not user-facing checks) ─────────────

// Residual contract of the tridiagonal eigensolver: factor * dim * scale.
inline constexpr double eig_residual_factor = 1e-13;

// Orthonormality budget for modal column systems.
inline constexpr double orthonormality_tol = 1e-12;

// Off-diagonal / diagonal agreement when assembling (Q^2+P^2)/2, times max(1,N).
inline constexpr double hamiltonian_assembly_factor = 1e-14;

// Commutator assembly agreement: max(1e-13, factor*(N+1)).  The square-root
// rounding in the matrix elements makes a flat 1e-13 unreachable past
// N ~ 150, so the bound grows with dimension while keeping the small-N floor.
inline constexpr double commutator_assembly_floor = 1e-13;
inline constexpr double commutator_assembly_factor = 2e-15;

inline double commutator_assembly_tol(int dim) {
  const double scaled = commutator_assembly_factor * static_cast<double>(dim);
  return scaled > commutator_assembly_floor ? scaled : commutator_assembly_floor;
}

// Two eigenvalues closer than factor * scale are a solver failure wherever
// simple spectra are guaranteed.
inline constexpr double near_tie_factor = 1e-14;

// A modal column whose last component is below this cannot be sign-oriented.
inline constexpr double orient_epsilon = 1e-13;

// Phase similarity between the two canonical tridiagonal operators is exact
// up to unit-phase arithmetic.
inline constexpr double phase_similarity_tol = 1e-15;

// Kernel nodes closer than this would blow up the 1/(x_k - x_j) entries.
inline constexpr double node_spacing_min = 1e-13;

// A transformed action difference whose diagonal exceeds this cannot be fed
// to the elementwise commutator solve (0 * P[j,j] = nonzero has no solution).
inline constexpr double elementwise_diag_tol = 1e-10;

// Scaled-value target for polished polynomial zeros, and the Newton budget.
inline constexpr double zero_polish_tol = 1e-13;
inline constexpr int zero_polish_max_steps = 100;

// Per-eigenvalue sweep budget of the implicit-shift solver.
inline constexpr int eig_sweep_budget = 60;

// Discarded tail weight above this means the state needs a larger N.
inline constexpr double tail_weight_max = 1e-6;

// State vectors are kept normalized to this; variances may round this far
// below zero before being treated as an error.
inline constexpr double state_norm_tol = 1e-12;
inline constexpr double variance_floor = -1e-12;

// Imaginary part allowed on an expectation value of a Hermitian operator.
inline constexpr double hermitian_imag_tol = 1e-12;

}  // namespace mml::report
