#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/root_solve.hpp"

namespace circlebench {

/// One factor of a circle homeomorphism lift: H(x) = x + c sin(2 pi x) / (2 pi).
/// c = 0 is the identity.
struct SineHomeo {
  double c = 0.0;

  [[nodiscard]] double lift(double x) const {
    return x + c * std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi);
  }
  [[nodiscard]] double derivative(double x) const {
    return 1.0 + c * std::cos(2.0 * std::numbers::pi * x);
  }
};

/// Lift of a circle homeomorphism fixing 0, built as a composition of sine
/// factors. `factors()` is in mathematical order: H = factors[0] o factors[1] o ...,
/// so the last factor is applied first. The empty composition is the identity.
class CircleHomeoSpec {
 public:
  CircleHomeoSpec() = default;

  static CircleHomeoSpec identity() { return {}; }
  static CircleHomeoSpec sine(double c) { return CircleHomeoSpec({SineHomeo{c}}); }
  static CircleHomeoSpec composition(std::vector<SineHomeo> factors) {
    return CircleHomeoSpec(std::move(factors));
  }

  [[nodiscard]] const std::vector<SineHomeo>& factors() const { return factors_; }
  [[nodiscard]] bool is_identity() const {
    for (const auto& f : factors_)
      if (f.c != 0.0) return false;
    return true;
  }

  [[nodiscard]] double lift(double x) const {
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) x = it->lift(x);
    return x;
  }
  double operator()(double x) const { return lift(x); }

  [[nodiscard]] double derivative(double x) const {
    double slope = 1.0;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
      slope *= it->derivative(x);
      x = it->lift(x);
    }
    return slope;
  }

  /// H^-1(y), solved on [floor(y), floor(y) + 1] where H(floor y) = floor y.
  [[nodiscard]] double inverse_lift(double y, double tol = defaults::solver_tolerance) const {
    if (is_identity()) return y;
    const double base = std::floor(y);
    auto fn = [this](double x) { return lift(x); };
    auto df = [this](double x) { return derivative(x); };
    return solve_increasing_newton(fn, df, y, base, base + 1.0, tol).mid();
  }

  [[nodiscard]] std::string describe() const {
    if (is_identity()) return "identity";
    std::string out;
    for (const auto& f : factors_) {
      if (!out.empty()) out += " o ";
      out += "sine(c=" + std::to_string(f.c) + ")";
    }
    return out;
  }

 private:
  explicit CircleHomeoSpec(std::vector<SineHomeo> factors) : factors_(std::move(factors)) {}

  std::vector<SineHomeo> factors_;
};

}  // namespace circlebench
