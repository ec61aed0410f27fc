#pragma once

// State vectors on the truncated number basis and the moment machinery:
// number and coherent states, seeded random states, expectation values,
// and the uncertainty product against its commutator bound
//
//   dQ * dP >= |<[Q,P]>| / 2 = |<D_N>| / 2,
//
// which holds for every state at every finite N; the margin can only round
// slightly negative.  For a truncated coherent state the action-difference
// mean is 1 - (N+1)|a_N|^2, so it converges to 1 exactly as fast as the
// discarded tail weight vanishes.

#include <cstdint>
#include <random>

#include "mml/core.hpp"

namespace mml::states {

struct StateVector {
  std::vector<cplx> coeffs;      // unit 2-norm
  double norm_deviation = 0.0;   // |raw norm - 1| before renormalization

  int dim() const { return static_cast<int>(coeffs.size()); }

  // Normalizes and records the deviation; throws StructureError on a
  // vanishing or non-finite norm.
  static StateVector from_coeffs(std::vector<cplx> raw);
};

StateVector number_state(int k, int n);

// Truncated coherent state, renormalized.  Throws TruncationError when the
// discarded tail weight exceeds the representability threshold.
StateVector coherent_state(cplx alpha, int n);

struct CoherentTruncation {
  StateVector state;
  double tail_weight = 0.0;
  bool converged = false;  // tail under the threshold
};

// Same construction without the throw: sweeps over N need the divergent
// rows flagged, not refused.
CoherentTruncation coherent_state_lenient(cplx alpha, int n);

// Complex-Gaussian coefficients, normalized; fully determined by the
// generator state (hand-rolled Box-Muller, no library distributions).
StateVector random_state(int dim, std::mt19937_64& rng);

// Expectation values; Hermitian inputs are asserted to give real values.
cplx expectation(const ComplexMatrix& op, const StateVector& psi);
double expectation(const SymTridiag& op, const StateVector& psi);
double expectation(const DiagonalMatrix& op, const StateVector& psi);

struct UncertaintyReport {
  int n = 0;
  double mean_q = 0.0, mean_p = 0.0, mean_d = 0.0, mean_h = 0.0;
  double dq = 0.0, dp = 0.0;
  double product = 0.0;  // dq * dp
  double bound = 0.0;    // |mean_d| / 2
  double margin = 0.0;   // product - bound
};

UncertaintyReport uncertainty_check(const StateVector& psi, int n);

struct ActionMeanRow {
  int n = 0;
  double mean_d = 0.0;
  double deviation = 0.0;  // |1 - mean_d|
  double tail_weight = 0.0;
  bool converged = false;
};

std::vector<ActionMeanRow> action_mean_sweep(cplx alpha, const std::vector<int>& n_list);

}  // namespace mml::states
