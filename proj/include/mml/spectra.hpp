#pragma once

// Spectral summaries and the truncation-convergence diagnostics.
//
// The position spectrum fills the real line with strictly interlacing,
// ever-denser nodes as N grows, so the largest nearest-neighbor gap inside a
// fixed window shrinks monotonically.  The resolvent diagnostic measures the
// same convergence from the analytic side: (Q_n - z)^{-1} psi for fixed
// off-axis z settles in Cauchy fashion as n doubles.  The linear solves run
// through a dedicated tridiagonal LU with partial pivoting so this path
// shares nothing with the eigensolver.

#include "mml/core.hpp"
#include "mml/states.hpp"

namespace mml::spectra {

struct GapStats {
  double window_lo = 0.0, window_hi = 0.0;
  int count_inside = 0;
  double max_gap = 0.0;
  double mean_gap = 0.0;
};

// Nearest-neighbor gaps among spectrum values inside [-a, a].
// Throws SizeError for a <= 0, StructureError when fewer than two values fall
// inside the window.
GapStats gap_statistics(const Spectrum& spec, double a);

struct Anomaly {
  double value = 0.0;   // N/2, the displaced top level
  double weight = 0.0;  // 1/(N+1), its share of the diagonal
};

// Closed-form anomaly, cross-checked exactly against the assembled
// energy diagonal (k+1/2 below the top, N/2 at the top).
Anomaly hamiltonian_anomaly(int n);

// Deviation of the assembled energy diagonal from the closed form (exact 0).
CheckResult hamiltonian_anomaly_check(int n);

// (Q_n - z)^{-1} rhs via tridiagonal LU with partial pivoting.
std::vector<cplx> resolvent_apply(int n, cplx z, const std::vector<cplx>& rhs);

struct ResolventDiag {
  cplx z;
  int n_small = 0, n_large = 0;
  double diff_norm = 0.0;  // ||pad(x_small) - x_large||_2
};

// Cauchy difference between two truncation levels for the same state
// (zero-padded into each level).  Throws SingularityError for real z.
ResolventDiag resolvent_cauchy(cplx z, const states::StateVector& psi, int n_small,
                               int n_large);

}  // namespace mml::spectra
