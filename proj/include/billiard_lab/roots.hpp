#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "billiard_lab/error.hpp"

namespace billiard_lab::roots {

struct Options {
  double ftol = 0.0;   // stop when |f| <= ftol
  double xtol = 0.0;   // stop when the bracket is narrower than xtol (0: machine limit)
  int max_iter = 200;
};

struct Result {
  double x;
  double fx;
  int iterations;
  bool converged;
};

/// Safeguarded secant/bisection on a sign-changing bracket [a, b].
///
/// Each iteration tries an inverse-quadratic or secant step from the two most
/// recent iterates and keeps it only if it lands strictly inside the current
/// bracket and the bracket has at least halved over the last two steps;
/// otherwise it bisects. The bracket always contains a sign change.
template <class F>
Result find_root(F&& f, double a, double b, double fa, double fb, const Options& opt = {}) {
  if (fa == 0.0) return {a, fa, 0, true};
  if (fb == 0.0) return {b, fb, 0, true};
  if (std::signbit(fa) == std::signbit(fb) || !std::isfinite(fa) || !std::isfinite(fb)) {
    throw Error(ErrorCode::not_bracketed, "find_root: endpoints do not bracket a sign change");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();

  // b is the best iterate, c the opposite end of the bracket, a the previous b.
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 1; it <= opt.max_iter; ++it) {
    if (std::signbit(fb) == std::signbit(fc)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * opt.xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(fb) <= opt.ftol || std::abs(m) <= tol || fb == 0.0) {
      return {b, fb, it, true};
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  return {b, fb, opt.max_iter, false};
}

template <class F>
Result find_root(F&& f, double a, double b, const Options& opt = {}) {
  const double fa = f(a);
  const double fb = f(b);
  return find_root(f, a, b, fa, fb, opt);
}

}  // namespace billiard_lab::roots
