#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spol/errors.hpp"

/// Shared numerical utilities: bracketed root finding (Brent-style),
/// central-difference differentiation, branch-controlled complex square root,
/// and deterministic sweep grids. All operations are pure and deterministic.

namespace spol::num {

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct RootResult {
  double x = 0.0;        ///< located root
  double residual = 0.0; ///< f(x) at the returned point
  int iterations = 0;
};

struct RootOptions {
  double tol_x_rel = 1e-10; ///< relative bracket-width tolerance
  double tol_f = 1e-9;      ///< absolute residual tolerance (function's natural units)
  int max_iter = 200;
};

/// Bracketed root finder: bisection with inverse-quadratic/secant acceleration
/// (Brent's method). Robust to flat regions near the root.
template <typename F>
[[nodiscard]] RootResult find_root(F&& f, Bracket bracket, RootOptions opt = {}) {
  double a = bracket.lo;
  double b = bracket.hi;
  if (!(a < b)) {
    throw BadGrid("find_root: bracket requires lo < hi, got [" + std::to_string(a) +
                  ", " + std::to_string(b) + "]");
  }
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw NonFinite("find_root: function not finite at a bracket endpoint");
  }
  if (fa * fb > 0.0) {
    throw NoSignChange("find_root: f has the same sign at both bracket endpoints");
  }

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                        0.5 * opt.tol_x_rel * std::abs(b);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || std::abs(fb) <= opt.tol_f) {
      return {b, fb, iter};
    }
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // secant / inverse quadratic interpolation
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw NonFinite("find_root: function not finite at x = " + std::to_string(b));
    }
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  throw NoConvergence("find_root: no convergence after " + std::to_string(opt.max_iter) +
                      " iterations");
}

/// Second-order central difference with relative step h = rel_step*|x|
/// and absolute fallback h = rel_step when |x| < 1.
template <typename F>
[[nodiscard]] double central_derivative(F&& f, double x, double rel_step = 1e-6) {
  const double h = rel_step * std::max(std::abs(x), 1.0);
  const double fp = f(x + h);
  const double fm = f(x - h);
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw NonFinite("central_derivative: function not finite at a stencil point");
  }
  return (fp - fm) / (2.0 * h);
}

enum class BranchRule : std::uint8_t {
  nonneg_real_part,
  nonneg_imag_part,
};

/// Square root of z on the branch whose designated part is >= 0; on the
/// boundary (designated part exactly 0) the root with the other part >= 0
/// is chosen. Total function.
[[nodiscard]] inline std::complex<double> complex_sqrt_branch(std::complex<double> z,
                                                              BranchRule rule) {
  std::complex<double> w = std::sqrt(z);  // principal branch: Re w >= 0
  switch (rule) {
    case BranchRule::nonneg_real_part:
      if (w.real() < 0.0 || (w.real() == 0.0 && w.imag() < 0.0)) w = -w;
      break;
    case BranchRule::nonneg_imag_part:
      if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
      break;
  }
  return w;
}

/// n equally spaced points over [lo, hi], both endpoints included.
[[nodiscard]] inline std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) {
    throw BadGrid("linspace: need n >= 2, got n = " + std::to_string(n));
  }
  if (!(lo < hi)) {
    throw BadGrid("linspace: need lo < hi, got lo = " + std::to_string(lo) +
                  ", hi = " + std::to_string(hi));
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = lo + step * k;
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace spol::num
