#pragma once

// Physicists' Hermite recurrence machinery.
//
//   H_0 = 1,  H_1 = 2x,  H_{k+1}(x) = 2x H_k(x) - 2k H_{k-1}(x)
//
// Raw values overflow near degree 150, so evaluation carries a separate
// base-2 exponent and also reports the scaled value H_k(x)/sqrt(2^k k!),
// which is exactly the k-th component of the (unnormalized) eigenvector
// recursion of the position matrix at eigenvalue x:
//
//   w_k = sqrt((k+1)/2);  u_0 = 1,  w_0 u_1 = x u_0,
//   w_k u_{k+1} = x u_k - w_{k-1} u_{k-1}.
//
// The zeros oracle never touches the eigensolver: it brackets each zero of
// H_m between adjacent zeros of H_{m-1} (interlacing) and polishes with
// safeguarded Newton steps on the scaled recurrence, accepting only when the
// Gaussian-weighted scaled value sits below the polish tolerance.

#include "mml/core.hpp"

namespace mml::hermite {

struct HermiteEval {
  int degree = 0;
  double point = 0.0;
  double value = 0.0;         // H_k(x); +-inf once past double range
  double scaled_value = 0.0;  // H_k(x) / sqrt(2^k k!)
  double log_scale = 0.0;     // base-2 log of the scale divisor, so
                              // value = scaled_value * 2^log_scale
};

// Raw three-term recurrence with periodic base-2 renormalization.
// Exact for exactly-representable small cases (no rescale, no rounding).
HermiteEval hermite_eval(int k, double x);

// All m zeros of H_m, ascending, simple by construction.
// Throws ConvergenceError if a zero fails to polish within budget.
Spectrum hermite_zeros_oracle(int m);

struct RecursionVector {
  std::vector<double> components;  // stored values; true u_k = components[k] * 2^log2_scale
  double log2_scale = 0.0;
};

// Unnormalized eigenvector recursion at candidate eigenvalue lambda,
// components 0..N, with overflow rescaling folded into log2_scale.
RecursionVector eigvec_recursion_raw(int n, double lambda);

// Same, normalized to unit 2-norm (the common power of two cancels).
std::vector<double> eigvec_recursion(int n, double lambda);

}  // namespace mml::hermite
