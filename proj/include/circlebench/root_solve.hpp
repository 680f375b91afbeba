#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"

namespace circlebench {

/// Closed interval certified to contain a root.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double mid() const { return lo + 0.5 * (hi - lo); }
  [[nodiscard]] double width() const { return hi - lo; }
};

namespace detail {

inline double bracket_slack(double target) { return 1e-12 * std::max(1.0, std::abs(target)); }

inline bool exhausted(double lo, double hi) {
  return !(lo < hi) || std::nextafter(lo, hi) >= hi;
}

template <class Fn>
bool check_bracket(const Fn& fn, double target, double& lo, double& hi, Bracket& out) {
  const double flo = fn(lo) - target;
  const double fhi = fn(hi) - target;
  const double slack = bracket_slack(target);
  if (flo > slack || fhi < -slack || !(lo <= hi)) {
    throw SolverError("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] for target " + std::to_string(target) + " (function not increasing?)");
  }
  if (flo >= 0.0) {
    out = {lo, lo};
    return true;
  }
  if (fhi <= 0.0) {
    out = {hi, hi};
    return true;
  }
  return false;
}

}  // namespace detail

/// Solve fn(x) = target for increasing fn on [lo, hi] by bisection until the
/// bracket is no wider than tol. Targets within a relative 1e-12 outside
/// [fn(lo), fn(hi)] clamp to the nearer end; anything further throws.
template <class Fn>
Bracket solve_increasing(const Fn& fn, double target, double lo, double hi,
                         double tol = defaults::solver_tolerance) {
  Bracket out;
  if (detail::check_bracket(fn, target, lo, hi, out)) return out;
  for (int it = 0; it < defaults::max_solver_iterations; ++it) {
    if (hi - lo <= tol || detail::exhausted(lo, hi)) break;
    const double mid = lo + 0.5 * (hi - lo);
    const double fm = fn(mid) - target;
    if (fm == 0.0) return {mid, mid};
    (fm < 0.0 ? lo : hi) = mid;
  }
  return {lo, hi};
}

/// Bisection with Newton acceleration. Newton steps are taken only when they
/// land inside the current bracket; once a step is shorter than tol/4 the
/// bracket is closed by probing both sides, so the result carries the same
/// certificate as plain bisection.
template <class Fn, class Deriv>
Bracket solve_increasing_newton(const Fn& fn, const Deriv& deriv, double target, double lo,
                                double hi, double tol = defaults::solver_tolerance) {
  Bracket out;
  if (detail::check_bracket(fn, target, lo, hi, out)) return out;
  double x = lo + 0.5 * (hi - lo);
  double width_before = hi - lo;
  int slow_steps = 0;
  for (int it = 0; it < defaults::max_solver_iterations; ++it) {
    if (hi - lo <= tol || detail::exhausted(lo, hi)) break;
    const double fx = fn(x) - target;
    if (fx == 0.0) return {x, x};
    (fx < 0.0 ? lo : hi) = x;
    if (hi - lo <= tol) break;

    if (hi - lo > 0.5 * width_before) {
      ++slow_steps;
    } else {
      slow_steps = 0;
    }
    width_before = hi - lo;

    const double slope = deriv(x);
    const double step = slope > 0.0 ? fx / slope : std::numeric_limits<double>::infinity();
    const double next = x - step;
    if (slow_steps >= 2 || !(next > lo && next < hi)) {
      x = lo + 0.5 * (hi - lo);
      slow_steps = 0;
      continue;
    }
    if (std::abs(step) < 0.25 * tol) {
      const double a = std::max(lo, next - 0.5 * tol);
      const double b = std::min(hi, next + 0.5 * tol);
      if (a > lo && fn(a) - target <= 0.0) lo = a;
      if (b < hi && fn(b) - target >= 0.0) hi = b;
      if (hi - lo <= tol) break;
      x = lo + 0.5 * (hi - lo);
      continue;
    }
    x = next;
  }
  return {lo, hi};
}

}  // namespace circlebench
