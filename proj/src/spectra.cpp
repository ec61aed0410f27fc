#include "mml/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mml/operators.hpp"
#include "mml/tolerances.hpp"

namespace mml::spectra {

GapStats gap_statistics(const Spectrum& spec, double a) {
  if (!(a > 0.0)) throw SizeError("gap window half-width must be positive");
  spec.require_strictly_ascending(0.0);
  GapStats out;
  out.window_lo = -a;
  out.window_hi = a;
  double prev = 0.0;
  double gap_sum = 0.0;
  int gaps = 0;
  for (double x : spec.values) {
    if (x < -a || x > a) continue;
    if (out.count_inside > 0) {
      double g = x - prev;
      out.max_gap = std::max(out.max_gap, g);
      gap_sum += g;
      ++gaps;
    }
    prev = x;
    ++out.count_inside;
  }
  if (out.count_inside < 2) {
    std::ostringstream msg;
    msg << "gap statistics need at least two spectrum values inside [-" << a
        << ", " << a << "], found " << out.count_inside;
    throw StructureError(msg.str());
  }
  out.mean_gap = gap_sum / gaps;
  return out;
}

Anomaly hamiltonian_anomaly(int n) {
  require_level(n);
  Anomaly a;
  a.value = n / 2.0;
  a.weight = 1.0 / (n + 1);
  // The assembled diagonal must reproduce the closed form exactly: k + 1/2
  // below the top entry and n/2 at the top.  Any deviation is a build bug,
  // not roundoff.
  DiagonalMatrix h = ops::build_hamiltonian(n);
  for (int k = 0; k < n; ++k) {
    if (h.diag[k] != k + 0.5) throw StructureError("energy diagonal deviates from k + 1/2");
  }
  if (h.diag[n] != a.value) throw StructureError("top energy level deviates from n/2");
  return a;
}

CheckResult hamiltonian_anomaly_check(int n) {
  DiagonalMatrix h = ops::build_hamiltonian(n);
  Anomaly a = hamiltonian_anomaly(n);
  double err = 0.0;
  for (int k = 0; k < n; ++k) err = std::max(err, std::abs(h.diag[k] - (k + 0.5)));
  err = std::max(err, std::abs(h.diag[n] - a.value));
  return make_check("hamiltonian_anomaly", n, err,
                    report::tolerance_for("hamiltonian_anomaly", n + 1));
}

std::vector<cplx> resolvent_apply(int n, cplx z, const std::vector<cplx>& rhs) {
  require_level(n);
  SymTridiag q = ops::build_position(n);
  const int dim = q.dim();
  if (static_cast<int>(rhs.size()) != dim)
    throw DimensionMismatch("right-hand side length does not match operator dimension");

  // Factor T - z in place with partial pivoting.  Band storage: dg main
  // diagonal, du first superdiagonal, du2 second superdiagonal (created only
  // by row swaps), mult elimination multipliers, swapped flags.
  std::vector<cplx> dg(dim), du(dim, cplx(0, 0)), du2(dim, cplx(0, 0)), mult(dim, cplx(0, 0));
  std::vector<unsigned char> swapped(dim, 0);
  for (int i = 0; i < dim; ++i) dg[i] = cplx(q.diag[i], 0.0) - z;
  for (int i = 0; i + 1 < dim; ++i) du[i] = cplx(q.offdiag[i], 0.0);

  for (int i = 0; i + 1 < dim; ++i) {
    const cplx sub(q.offdiag[i], 0.0);  // entry (i+1, i), untouched by earlier steps
    if (std::abs(sub) <= std::abs(dg[i])) {
      if (dg[i] == cplx(0.0, 0.0)) throw SingularityError("shifted operator is singular");
      cplx m = sub / dg[i];
      mult[i] = m;
      dg[i + 1] -= m * du[i];
    } else {
      // Swap rows i and i+1.  Before the swap row i is (dg[i], du[i], 0) and
      // row i+1 is (sub, dg[i+1], du[i+1]).
      cplx m = dg[i] / sub;
      cplx old_du0 = du[i];
      cplx old_dg1 = dg[i + 1];
      cplx old_du1 = (i + 2 < dim) ? du[i + 1] : cplx(0.0, 0.0);
      dg[i] = sub;
      du[i] = old_dg1;
      du2[i] = old_du1;
      dg[i + 1] = old_du0 - m * old_dg1;
      if (i + 2 < dim) du[i + 1] = -m * old_du1;
      mult[i] = m;
      swapped[i] = 1;
    }
  }
  if (dg[dim - 1] == cplx(0.0, 0.0)) throw SingularityError("shifted operator is singular");

  // Forward pass on the right-hand side.
  std::vector<cplx> x = rhs;
  for (int i = 0; i + 1 < dim; ++i) {
    if (swapped[i]) std::swap(x[i], x[i + 1]);
    x[i + 1] -= mult[i] * x[i];
  }
  // Back substitution through the three stored bands.
  for (int i = dim - 1; i >= 0; --i) {
    cplx acc = x[i];
    if (i + 1 < dim) acc -= du[i] * x[i + 1];
    if (i + 2 < dim) acc -= du2[i] * x[i + 2];
    x[i] = acc / dg[i];
  }
  return x;
}

ResolventDiag resolvent_cauchy(cplx z, const states::StateVector& psi, int n_small,
                               int n_large) {
  if (z.imag() == 0.0)
    throw SingularityError("resolvent diagnostic needs z off the real axis");
  if (n_small >= n_large)
    throw SizeError("truncation levels must satisfy n_small < n_large");
  require_level(n_small);
  require_level(n_large);
  if (psi.dim() > n_small + 1)
    throw DimensionMismatch("state does not fit inside the smaller truncation");

  auto embed = [&](int n) {
    std::vector<cplx> v(static_cast<std::size_t>(n) + 1, cplx(0.0, 0.0));
    for (int k = 0; k < psi.dim(); ++k) v[k] = psi.coeffs[k];
    return v;
  };
  std::vector<cplx> xs = resolvent_apply(n_small, z, embed(n_small));
  std::vector<cplx> xl = resolvent_apply(n_large, z, embed(n_large));

  double sum = 0.0;
  for (int k = 0; k <= n_large; ++k) {
    cplx d = (k <= n_small ? xs[k] : cplx(0.0, 0.0)) - xl[k];
    sum += d.real() * d.real() + d.imag() * d.imag();
  }
  ResolventDiag out;
  out.z = z;
  out.n_small = n_small;
  out.n_large = n_large;
  out.diff_norm = std::sqrt(sum);
  return out;
}

}  // namespace mml::spectra
