#include "mml/hermite.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mml/tolerances.hpp"

namespace mml::hermite {

namespace {

constexpr double k_ln2 = 0.6931471805599453094;

// Mantissas are renormalized into +-2^500 once they leave this window, so a
// recurrence step can never overflow.
constexpr double k_window_hi = 0x1p500;
constexpr double k_window_lo = 0x1p-500;

// Realize mant * 2^t with a possibly non-integer, possibly huge t.
double realize_pow2(double mant, double t) {
  if (mant == 0.0) return 0.0;
  if (t > 4096.0) t = 4096.0;  // saturates to inf below
  if (t < -4096.0) t = -4096.0;
  const double ti = std::floor(t);
  return std::ldexp(mant * std::exp2(t - ti), static_cast<int>(ti));
}

// Scaled values h_k = H_k / sqrt(2^k k!) for k = m-1, m at x, sharing one
// base-2 exponent (exact cancellation in ratios).
struct ScaledPair {
  double hm1 = 0.0;  // h_{m-1}
  double hm = 0.0;   // h_m
  long exp2 = 0;
};

ScaledPair scaled_pair(int m, double x) {
  ScaledPair p;
  if (m == 0) {
    p.hm = 1.0;
    return p;
  }
  double prev = 1.0;                  // h_0
  double cur = std::sqrt(2.0) * x;   // h_1
  long e = 0;
  for (int k = 1; k < m; ++k) {
    const double c1 = std::sqrt(2.0 / (static_cast<double>(k) + 1.0));
    const double c2 =
        std::sqrt(static_cast<double>(k) / (static_cast<double>(k) + 1.0));
    const double next = c1 * x * cur - c2 * prev;
    prev = cur;
    cur = next;
    const double mx = std::max(std::abs(prev), std::abs(cur));
    if (mx > k_window_hi) {
      prev = std::ldexp(prev, -500);
      cur = std::ldexp(cur, -500);
      e += 500;
    } else if (mx > 0.0 && mx < k_window_lo) {
      prev = std::ldexp(prev, 500);
      cur = std::ldexp(cur, 500);
      e -= 500;
    }
  }
  p.hm1 = prev;
  p.hm = cur;
  p.exp2 = e;
  return p;
}

// Gaussian-weighted scaled value h_m(x) e^{-x^2/2}: O(1) across the whole
// oscillatory region, which is what makes an absolute polish target usable.
double weighted_value(const ScaledPair& p, double x) {
  const double t = static_cast<double>(p.exp2) - x * x / (2.0 * k_ln2);
  return realize_pow2(p.hm, t);
}

// One polished zero of H_m inside the sign-changing bracket [lo, hi].
double polish_zero(int m, double lo, double hi) {
  const double root2m = std::sqrt(2.0 * static_cast<double>(m));
  double flo = weighted_value(scaled_pair(m, lo), lo);
  double fhi = weighted_value(scaled_pair(m, hi), hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw StructureError("hermite zeros: bracket without sign change at degree " +
                         std::to_string(m));
  }
  double x = 0.5 * (lo + hi);
  for (int step = 0; step < report::zero_polish_max_steps; ++step) {
    const ScaledPair p = scaled_pair(m, x);
    const double f = weighted_value(p, x);
    if (f == 0.0) return x;
    if ((f > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = f;
    } else {
      hi = x;
    }
    // Newton step on the shared-exponent mantissas; the weight and the
    // power-of-two factor cancel in the ratio.
    const double deriv = root2m * p.hm1 - x * p.hm;
    double xn;
    if (deriv != 0.0) {
      xn = x - p.hm / deriv;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // fall back to bisection
    } else {
      xn = 0.5 * (lo + hi);
    }
    const double eps_here =
        2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x));
    if (std::abs(xn - x) <= eps_here || hi - lo <= 2.0 * eps_here) {
      x = xn;
      break;
    }
    x = xn;
  }
  const double resid = std::abs(weighted_value(scaled_pair(m, x), x));
  if (resid > report::zero_polish_tol) {
    throw ConvergenceError("hermite zeros: polish stalled at degree " + std::to_string(m) +
                           ", scaled residual " + std::to_string(resid));
  }
  return x;
}

}  // namespace

HermiteEval hermite_eval(int k, double x) {
  if (k < 0) throw SizeError("hermite_eval: degree must be nonnegative");
  HermiteEval out;
  out.degree = k;
  out.point = x;

  double prev = 0.0;  // H_{-1}, unused seed
  double cur = 1.0;   // H_0
  long e = 0;
  for (int j = 0; j < k; ++j) {
    const double next = 2.0 * x * cur - 2.0 * static_cast<double>(j) * prev;
    prev = cur;
    cur = next;
    const double mx = std::max(std::abs(prev), std::abs(cur));
    if (mx > k_window_hi) {
      prev = std::ldexp(prev, -500);
      cur = std::ldexp(cur, -500);
      e += 500;
    } else if (mx > 0.0 && mx < k_window_lo) {
      prev = std::ldexp(prev, 500);
      cur = std::ldexp(cur, 500);
      e -= 500;
    }
  }

  // log2 sqrt(2^k k!) via lgamma; exact 0 for k = 0.
  out.log_scale =
      0.5 * (static_cast<double>(k) + std::lgamma(static_cast<double>(k) + 1.0) / k_ln2);
  out.value = realize_pow2(cur, static_cast<double>(e));
  out.scaled_value = realize_pow2(cur, static_cast<double>(e) - out.log_scale);
  return out;
}

Spectrum hermite_zeros_oracle(int m) {
  if (m < 0) throw SizeError("hermite_zeros_oracle: degree must be nonnegative");
  if (m > dimension_cap() + 1) {
    throw SizeError("hermite_zeros_oracle: degree " + std::to_string(m) +
                    " exceeds dimension cap + 1");
  }
  Spectrum spec;
  if (m == 0) return spec;

  // Build up degree by degree; the zeros of H_{d-1} plus the outer bounds
  // +-(sqrt(2d+1)+1) bracket every zero of H_d exactly once.
  std::vector<double> cur = {0.0};  // H_1
  for (int d = 2; d <= m; ++d) {
    const double bound = std::sqrt(2.0 * static_cast<double>(d) + 1.0) + 1.0;
    std::vector<double> next(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) {
      const double lo = (i == 0) ? -bound : cur[static_cast<size_t>(i) - 1];
      const double hi = (i == d - 1) ? bound : cur[static_cast<size_t>(i)];
      next[static_cast<size_t>(i)] = polish_zero(d, lo, hi);
    }
    cur = std::move(next);
  }
  spec.values = std::move(cur);

  double scale = 1.0;
  for (double v : spec.values) scale = std::max(scale, std::abs(v));
  spec.require_strictly_ascending(report::near_tie_factor * scale);
  return spec;
}

RecursionVector eigvec_recursion_raw(int n, double lambda) {
  require_level(n);
  RecursionVector out;
  auto& u = out.components;
  u.assign(static_cast<size_t>(n) + 1, 0.0);
  u[0] = 1.0;
  long shifts = 0;
  for (int k = 0; k < n; ++k) {
    const double wk = std::sqrt((static_cast<double>(k) + 1.0) / 2.0);
    double next;
    if (k == 0) {
      next = lambda * u[0] / wk;
    } else {
      const double wkm1 = std::sqrt(static_cast<double>(k) / 2.0);
      next = (lambda * u[static_cast<size_t>(k)] -
              wkm1 * u[static_cast<size_t>(k) - 1]) /
             wk;
    }
    u[static_cast<size_t>(k) + 1] = next;
    if (std::abs(next) > k_window_hi) {
      // Rescale the whole prefix so every stored component shares one factor.
      for (int j = 0; j <= k + 1; ++j)
        u[static_cast<size_t>(j)] = std::ldexp(u[static_cast<size_t>(j)], -500);
      shifts += 500;
    }
  }
  out.log2_scale = static_cast<double>(shifts);
  return out;
}

std::vector<double> eigvec_recursion(int n, double lambda) {
  RecursionVector raw = eigvec_recursion_raw(n, lambda);
  double ss = 0.0;
  for (double v : raw.components) ss += v * v;
  const double norm = std::sqrt(ss);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw StructureError("eigvec recursion: vector norm degenerate at N=" +
                         std::to_string(n));
  }
  for (double& v : raw.components) v /= norm;
  return std::move(raw.components);
}

}  // namespace mml::hermite
