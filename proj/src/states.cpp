#include "mml/states.hpp"

#include <cmath>
#include <string>

#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::states {

namespace {

constexpr double k_ln2 = 0.6931471805599453094;

double pow2_realize(double mant, double t) {
  if (mant == 0.0) return 0.0;
  if (t > 4096.0) t = 4096.0;
  if (t < -4096.0) t = -4096.0;
  const double ti = std::floor(t);
  return std::ldexp(mant * std::exp2(t - ti), static_cast<int>(ti));
}

// Exact discarded weight of the truncation: sum_{k>n} e^{-mu} mu^k / k!
// summed forward from the first discarded term, so tiny tails stay
// representable instead of vanishing into 1 - (1 - tail).
double poisson_tail(double mu, int n) {
  if (mu == 0.0) return 0.0;
  const double log2_first = (-mu + (static_cast<double>(n) + 1.0) * std::log(mu) -
                             std::lgamma(static_cast<double>(n) + 2.0)) /
                            k_ln2;
  double term = pow2_realize(1.0, log2_first);
  double sum = 0.0;
  for (int k = n + 1; k < n + 2000000; ++k) {
    sum += term;
    term *= mu / (static_cast<double>(k) + 1.0);
    if (term < sum * 1e-19 + 1e-320) break;
  }
  return sum;
}

}  // namespace

StateVector StateVector::from_coeffs(std::vector<cplx> raw) {
  if (raw.empty()) throw SizeError("state vector: empty coefficient list");
  double ss = 0.0;
  for (const cplx& c : raw) ss += std::norm(c);
  const double norm = std::sqrt(ss);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw StructureError("state vector: norm is zero or non-finite");
  }
  StateVector psi;
  psi.norm_deviation = std::abs(norm - 1.0);
  for (cplx& c : raw) c /= norm;
  psi.coeffs = std::move(raw);
  return psi;
}

StateVector number_state(int k, int n) {
  require_level(n);
  if (k < 0 || k > n) {
    throw SizeError("number_state: index " + std::to_string(k) + " outside 0.." +
                    std::to_string(n));
  }
  StateVector psi;
  psi.coeffs.assign(static_cast<size_t>(n) + 1, cplx(0.0, 0.0));
  psi.coeffs[static_cast<size_t>(k)] = 1.0;
  return psi;
}

CoherentTruncation coherent_state_lenient(cplx alpha, int n) {
  require_level(n);
  const double mu = std::norm(alpha);

  // a_k = e^{-mu/2} alpha^k / sqrt(k!), built iteratively with a carried
  // base-2 exponent so large |alpha| cannot underflow the early terms.
  std::vector<cplx> raw(static_cast<size_t>(n) + 1);
  double re = 1.0, im = 0.0;  // alpha^k / sqrt(k!) mantissa
  double e2 = -mu / (2.0 * k_ln2);
  raw[0] = pow2_realize(1.0, e2);
  for (int k = 0; k < n; ++k) {
    const double root = std::sqrt(static_cast<double>(k) + 1.0);
    const double nre = (re * alpha.real() - im * alpha.imag()) / root;
    const double nim = (re * alpha.imag() + im * alpha.real()) / root;
    re = nre;
    im = nim;
    const double mx = std::max(std::abs(re), std::abs(im));
    if (mx > 0x1p500) {
      re = std::ldexp(re, -500);
      im = std::ldexp(im, -500);
      e2 += 500.0;
    } else if (mx > 0.0 && mx < 0x1p-500) {
      re = std::ldexp(re, 500);
      im = std::ldexp(im, 500);
      e2 -= 500.0;
    }
    raw[static_cast<size_t>(k) + 1] =
        cplx(pow2_realize(re, e2), pow2_realize(im, e2));
  }

  CoherentTruncation out;
  out.tail_weight = poisson_tail(mu, n);
  out.converged = out.tail_weight <= report::tail_weight_max;
  out.state = StateVector::from_coeffs(std::move(raw));
  return out;
}

StateVector coherent_state(cplx alpha, int n) {
  CoherentTruncation t = coherent_state_lenient(alpha, n);
  if (!t.converged) {
    throw TruncationError("coherent_state: discarded tail weight " +
                          std::to_string(t.tail_weight) + " at N=" + std::to_string(n) +
                          " exceeds " + std::to_string(report::tail_weight_max) +
                          "; raise N");
  }
  return std::move(t.state);
}

StateVector random_state(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw SizeError("random_state: dimension must be positive");
  std::vector<cplx> raw(static_cast<size_t>(dim));
  for (cplx& c : raw) {
    // Box-Muller on fixed 53-bit uniforms; (x + 0.5) * 2^-53 never hits 0 or 1.
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    const double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    c = cplx(r * std::cos(phi), r * std::sin(phi));
  }
  return StateVector::from_coeffs(std::move(raw));
}

cplx expectation(const ComplexMatrix& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) throw DimensionMismatch("expectation: dimension mismatch");
  const std::vector<cplx> y = apply(op, psi.coeffs);
  double re = 0.0, im = 0.0;
  for (size_t j = 0; j < y.size(); ++j) {
    const cplx c = psi.coeffs[j];
    re += c.real() * y[j].real() + c.imag() * y[j].imag();
    im += c.real() * y[j].imag() - c.imag() * y[j].real();
  }
  if (is_hermitian(op, report::hermitian_imag_tol) &&
      std::abs(im) > report::hermitian_imag_tol * std::max(1.0, std::abs(re))) {
    throw StructureError("expectation: Hermitian operator produced imaginary part " +
                         std::to_string(im));
  }
  return cplx(re, im);
}

double expectation(const SymTridiag& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) throw DimensionMismatch("expectation: dimension mismatch");
  // <psi|T|psi> = sum d_j |c_j|^2 + 2 sum w_j Re(conj(c_j) c_{j+1}): real by
  // construction, no imaginary part to assert away.
  const int n = op.dim();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    s += op.diag[static_cast<size_t>(j)] * std::norm(psi.coeffs[static_cast<size_t>(j)]);
  }
  for (int j = 0; j + 1 < n; ++j) {
    const cplx a = psi.coeffs[static_cast<size_t>(j)];
    const cplx b = psi.coeffs[static_cast<size_t>(j) + 1];
    s += 2.0 * op.offdiag[static_cast<size_t>(j)] *
         (a.real() * b.real() + a.imag() * b.imag());
  }
  return s;
}

double expectation(const DiagonalMatrix& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) throw DimensionMismatch("expectation: dimension mismatch");
  double s = 0.0;
  for (size_t j = 0; j < psi.coeffs.size(); ++j) s += op.diag[j] * std::norm(psi.coeffs[j]);
  return s;
}

UncertaintyReport uncertainty_check(const StateVector& psi, int n) {
  require_level(n);
  if (psi.dim() != n + 1) throw DimensionMismatch("uncertainty_check: dimension mismatch");

  const SymTridiag q = ops::build_position(n);
  const ComplexMatrix p = ops::build_momentum(n);

  UncertaintyReport rep;
  rep.n = n;
  rep.mean_q = expectation(q, psi);
  rep.mean_p = expectation(p, psi).real();
  rep.mean_d = expectation(ops::build_action_difference(n), psi);
  rep.mean_h = expectation(ops::build_hamiltonian(n), psi);

  // Second moments as squared norms: <Q^2> = ||Q psi||^2 keeps them
  // nonnegative up to rounding.
  const std::vector<cplx> qpsi = apply(q, psi.coeffs);
  const std::vector<cplx> ppsi = apply(p, psi.coeffs);
  double q2 = 0.0, p2 = 0.0;
  for (size_t j = 0; j < qpsi.size(); ++j) {
    q2 += std::norm(qpsi[j]);
    p2 += std::norm(ppsi[j]);
  }

  double varq = q2 - rep.mean_q * rep.mean_q;
  double varp = p2 - rep.mean_p * rep.mean_p;
  if (varq < report::variance_floor || varp < report::variance_floor) {
    throw StructureError("uncertainty_check: variance rounded below " +
                         std::to_string(report::variance_floor));
  }
  rep.dq = std::sqrt(std::max(varq, 0.0));
  rep.dp = std::sqrt(std::max(varp, 0.0));
  rep.product = rep.dq * rep.dp;
  rep.bound = 0.5 * std::abs(rep.mean_d);
  rep.margin = rep.product - rep.bound;
  return rep;
}

std::vector<ActionMeanRow> action_mean_sweep(cplx alpha, const std::vector<int>& n_list) {
  if (n_list.empty()) throw SizeError("action_mean_sweep: empty level list");
  std::vector<ActionMeanRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    const CoherentTruncation t = coherent_state_lenient(alpha, n);
    ActionMeanRow row;
    row.n = n;
    row.mean_d = expectation(ops::build_action_difference(n), t.state);
    row.deviation = std::abs(1.0 - row.mean_d);
    row.tail_weight = t.tail_weight;
    row.converged = t.converged;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mml::states
