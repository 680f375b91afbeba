#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/homeo.hpp"
#include "circlebench/root_solve.hpp"

namespace circlebench {

class CircleMapSpec;

enum class MapKind { piecewise_linear_full_branch, linear, smooth_sine, conjugated };

inline const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::piecewise_linear_full_branch: return "piecewise_linear_full_branch";
    case MapKind::linear: return "linear";
    case MapKind::smooth_sine: return "smooth_sine";
    case MapKind::conjugated: return "conjugated";
  }
  return "unknown";
}

/// Branch i maps [c_i, c_{i+1}] linearly onto [i, i+1]; c_0 = 0, c_d = 1 implicit.
struct PiecewiseLinearParams {
  std::vector<double> cuts;
};

/// F(x) = d x.
struct LinearParams {
  int degree = 2;
};

/// F(x) = d x + epsilon sin(2 pi x) / (2 pi).
struct SmoothSineParams {
  int degree = 2;
  double epsilon = 0.0;
};

/// F = H^-1 o G o H.
struct ConjugatedParams {
  std::shared_ptr<const CircleMapSpec> base;
  CircleHomeoSpec homeo;
};

/// Declarative, unvalidated description of a degree-d circle endomorphism lift.
class CircleMapSpec {
 public:
  using Params = std::variant<PiecewiseLinearParams, LinearParams, SmoothSineParams, ConjugatedParams>;

  static CircleMapSpec piecewise_linear(std::vector<double> cuts) {
    return CircleMapSpec(PiecewiseLinearParams{std::move(cuts)});
  }
  /// The degree-2 map x/alpha on [0, alpha], 1 + (x - alpha)/(1 - alpha) on [alpha, 1].
  static CircleMapSpec falpha(double alpha) { return piecewise_linear({alpha}); }
  static CircleMapSpec linear(int degree) { return CircleMapSpec(LinearParams{degree}); }
  static CircleMapSpec smooth_sine(int degree, double epsilon) {
    return CircleMapSpec(SmoothSineParams{degree, epsilon});
  }
  static CircleMapSpec conjugated(CircleMapSpec base, CircleHomeoSpec homeo) {
    return CircleMapSpec(
        ConjugatedParams{std::make_shared<const CircleMapSpec>(std::move(base)), std::move(homeo)});
  }

  [[nodiscard]] MapKind kind() const { return static_cast<MapKind>(params_.index()); }
  [[nodiscard]] const Params& params() const { return params_; }

  [[nodiscard]] int degree() const {
    return std::visit(
        [](const auto& p) -> int {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PiecewiseLinearParams>) {
            return static_cast<int>(p.cuts.size()) + 1;
          } else if constexpr (std::is_same_v<T, ConjugatedParams>) {
            return p.base ? p.base->degree() : 0;
          } else {
            return p.degree;
          }
        },
        params_);
  }

  [[nodiscard]] std::string describe() const {
    return std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, PiecewiseLinearParams>) {
            std::string s = "piecewise_linear_full_branch(cuts=[";
            for (std::size_t i = 0; i < p.cuts.size(); ++i)
              s += (i ? "," : "") + std::to_string(p.cuts[i]);
            return s + "])";
          } else if constexpr (std::is_same_v<T, LinearParams>) {
            return "linear(d=" + std::to_string(p.degree) + ")";
          } else if constexpr (std::is_same_v<T, SmoothSineParams>) {
            return "smooth_sine(d=" + std::to_string(p.degree) + ",eps=" + std::to_string(p.epsilon) + ")";
          } else {
            return "conjugated(" + (p.base ? p.base->describe() : std::string("null")) + ", " +
                   p.homeo.describe() + ")";
          }
        },
        params_);
  }

 private:
  explicit CircleMapSpec(Params params) : params_(std::move(params)) {}

  Params params_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string check;
  double location = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::string subject;
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  void add(std::string check, double location, std::string detail) {
    violations.push_back({std::move(check), location, std::move(detail)});
  }
  [[nodiscard]] bool has(const std::string& check) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.check == check; });
  }
  [[nodiscard]] std::string summary() const {
    if (ok()) return subject + ": ok";
    std::string s = subject + ": " + std::to_string(violations.size()) + " violation(s)";
    for (const auto& v : violations)
      s += "; " + v.check + " at x=" + std::to_string(v.location) + " (" + v.detail + ")";
    return s;
  }
};

namespace detail {

// Strict monotonicity of fn over the sorted sample points.
template <class Fn>
void check_increasing(const Fn& fn, std::vector<double> points, ValidationReport& report) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  double prev = fn(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double cur = fn(points[i]);
    if (!(cur > prev)) {
      report.add("monotonicity", points[i],
                 "lift not strictly increasing: F(" + std::to_string(points[i - 1]) + ")=" +
                     std::to_string(prev) + " >= F(" + std::to_string(points[i]) + ")=" +
                     std::to_string(cur));
      return;
    }
    prev = cur;
  }
}

inline std::vector<double> unit_grid(int n) {
  std::vector<double> pts(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) pts[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
  return pts;
}

}  // namespace detail

inline ValidationReport validate(const CircleHomeoSpec& homeo,
                                 int grid = defaults::validation_grid) {
  ValidationReport report{"homeo " + homeo.describe(), {}};
  for (const auto& f : homeo.factors()) {
    if (!(std::abs(f.c) < 1.0))
      report.add("parameter", 0.0, "sine_homeo amplitude |c| must be < 1, got " + std::to_string(f.c));
  }
  if (!report.ok()) return report;
  detail::check_increasing([&](double x) { return homeo.lift(x); }, detail::unit_grid(grid), report);
  if (std::abs(homeo.lift(0.0)) > defaults::validation_tolerance)
    report.add("fixes_zero", 0.0, "H(0) != 0");
  if (std::abs(homeo.lift(1.0) - 1.0) > defaults::validation_tolerance)
    report.add("periodicity", 1.0, "H(1) != 1");
  return report;
}

inline ValidationReport validate(const CircleMapSpec& spec, int grid = defaults::validation_grid);

// ---------------------------------------------------------------------------
// Validated map

struct SolverOptions {
  double tolerance = defaults::solver_tolerance;
};

/// A validated circle endomorphism lift. Immutable; all operations are pure.
class CircleMap {
 public:
  /// Validates and builds. Throws ValidationError carrying the report summary.
  static CircleMap create(const CircleMapSpec& spec, SolverOptions options = {}) {
    ValidationReport report = validate(spec);
    if (!report.ok()) throw ValidationError(report.summary());
    return CircleMap(spec, options);
  }

  [[nodiscard]] const CircleMapSpec& spec() const { return spec_; }
  [[nodiscard]] MapKind kind() const { return spec_.kind(); }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] double solver_tolerance() const { return options_.tolerance; }

  /// True when inverse branches are exact closed forms.
  [[nodiscard]] bool is_piecewise_linear() const {
    return kind() == MapKind::piecewise_linear_full_branch || kind() == MapKind::linear;
  }
  /// Level-1 endpoints c_0 = 0 < c_1 < ... < c_d = 1.
  [[nodiscard]] std::span<const double> cuts() const { return cuts_; }
  /// Branch lengths c_{i+1} - c_i (exact inputs for piecewise-linear kinds).
  [[nodiscard]] std::span<const double> branch_lengths() const { return lengths_; }
  [[nodiscard]] double min_slope() const { return min_slope_; }
  [[nodiscard]] double max_slope() const { return max_slope_; }

  /// Absolute error attached to one inverse-branch evaluation.
  [[nodiscard]] double step_error() const {
    return is_piecewise_linear() ? 4.0 * std::numeric_limits<double>::epsilon()
                                 : options_.tolerance;
  }
  /// Conservative error radius of a point produced by `solves` nested
  /// inverse-branch evaluations: errors from earlier solves pass through later
  /// inverse branches whose slope is at most 1 / min_slope.
  [[nodiscard]] double endpoint_radius(int solves) const {
    const double contraction = std::max(1.0, 1.0 / min_slope_);
    double radius = 0.0;
    for (int k = 0; k < solves; ++k) radius = step_error() + contraction * radius;
    return radius;
  }

  /// F(x) on the whole real line.
  [[nodiscard]] double lift(double x) const {
    switch (kind()) {
      case MapKind::linear: return degree_ * x;
      case MapKind::piecewise_linear_full_branch: return pl_lift(x);
      case MapKind::smooth_sine: return sine_lift(x);
      case MapKind::conjugated: {
        const auto& p = std::get<ConjugatedParams>(spec_.params());
        return p.homeo.inverse_lift(base_->lift(p.homeo.lift(x)), options_.tolerance);
      }
    }
    return 0.0;
  }
  double operator()(double x) const { return lift(x); }

  /// The x in [c_branch, c_{branch+1}] with F(x) = y + branch, for y in [0, 1].
  [[nodiscard]] double inverse_branch(int branch, double y) const {
    if (branch < 0 || branch >= degree_)
      throw std::out_of_range("branch " + std::to_string(branch) + " outside [0, " +
                              std::to_string(degree_ - 1) + "]");
    y = std::clamp(y, 0.0, 1.0);
    const auto b = static_cast<std::size_t>(branch);
    switch (kind()) {
      case MapKind::linear: return (y + branch) / degree_;
      case MapKind::piecewise_linear_full_branch:
        return y <= 0.5 ? cuts_[b] + y * lengths_[b] : cuts_[b + 1] - (1.0 - y) * lengths_[b];
      case MapKind::smooth_sine: return solve_sine(y + branch, cuts_[b], cuts_[b + 1]);
      case MapKind::conjugated: {
        const auto& h = std::get<ConjugatedParams>(spec_.params()).homeo;
        const double u = base_->inverse_branch(branch, std::clamp(h.lift(y), 0.0, 1.0));
        return std::clamp(h.inverse_lift(u, options_.tolerance), cuts_[b], cuts_[b + 1]);
      }
    }
    return 0.0;
  }

  /// F^-1(y) for the lift as a homeomorphism of the real line. The integer
  /// part of y selects the period shift and the branch.
  [[nodiscard]] double inverse_lift(double y) const {
    const double j = std::floor(y);
    const double shift = std::floor(j / degree_);
    const int branch = static_cast<int>(j - shift * degree_);
    const auto b = static_cast<std::size_t>(branch);
    switch (kind()) {
      case MapKind::linear: return y / degree_;
      case MapKind::piecewise_linear_full_branch:
        // Measure from whichever branch end is nearer so that preimages of
        // points close to an integer keep their relative precision.
        if (y - j <= 0.5) return (shift + cuts_[b]) + (y - j) * lengths_[b];
        return (shift + cuts_[b + 1]) - ((j + 1.0) - y) * lengths_[b];
      case MapKind::smooth_sine: return solve_sine(y, shift + cuts_[b], shift + cuts_[b + 1]);
      case MapKind::conjugated: {
        const auto& h = std::get<ConjugatedParams>(spec_.params()).homeo;
        return h.inverse_lift(base_->inverse_lift(h.lift(y)), options_.tolerance);
      }
    }
    return 0.0;
  }

 private:
  friend ValidationReport validate(const CircleMapSpec&, int);

  // Structural parameters must already be sane; sampled properties are not checked.
  static CircleMap unchecked(const CircleMapSpec& spec) { return CircleMap(spec, {}); }

  CircleMap(const CircleMapSpec& spec, SolverOptions options)
      : spec_(spec), options_(options), degree_(spec.degree()) {
    cuts_.assign(static_cast<std::size_t>(degree_) + 1, 0.0);
    cuts_.back() = 1.0;
    switch (kind()) {
      case MapKind::linear:
        for (int i = 1; i < degree_; ++i) cuts_[static_cast<std::size_t>(i)] = static_cast<double>(i) / degree_;
        break;
      case MapKind::piecewise_linear_full_branch: {
        const auto& c = std::get<PiecewiseLinearParams>(spec_.params()).cuts;
        std::copy(c.begin(), c.end(), cuts_.begin() + 1);
        break;
      }
      case MapKind::smooth_sine:
        for (int i = 1; i < degree_; ++i)
          cuts_[static_cast<std::size_t>(i)] = solve_sine(static_cast<double>(i), 0.0, 1.0);
        break;
      case MapKind::conjugated: {
        const auto& p = std::get<ConjugatedParams>(spec_.params());
        base_ = std::make_shared<const CircleMap>(CircleMap(*p.base, options));
        for (int i = 1; i < degree_; ++i)
          cuts_[static_cast<std::size_t>(i)] =
              p.homeo.inverse_lift(base_->cuts()[static_cast<std::size_t>(i)], options.tolerance);
        break;
      }
    }
    lengths_.resize(static_cast<std::size_t>(degree_));
    for (std::size_t i = 0; i < lengths_.size(); ++i) lengths_[i] = cuts_[i + 1] - cuts_[i];
    if (is_piecewise_linear()) {
      min_slope_ = 1.0 / *std::max_element(lengths_.begin(), lengths_.end());
      max_slope_ = 1.0 / *std::min_element(lengths_.begin(), lengths_.end());
    } else {
      sample_slopes();
    }
  }

  double pl_lift(double x) const {
    const double j = std::floor(x);
    const double u = x - j;
    auto it = std::upper_bound(cuts_.begin() + 1, cuts_.end() - 1, u);
    const auto b = static_cast<std::size_t>(it - cuts_.begin() - 1);
    const double base = j * degree_ + static_cast<double>(b);
    // Offsets are taken from the nearer branch end, computed directly from x.
    if (u - cuts_[b] <= 0.5 * lengths_[b]) return base + (x - (j + cuts_[b])) / lengths_[b];
    return (base + 1.0) - ((j + cuts_[b + 1]) - x) / lengths_[b];
  }

  double sine_lift(double x) const {
    const auto& p = std::get<SmoothSineParams>(spec_.params());
    return p.degree * x + p.epsilon * std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi);
  }

  double solve_sine(double target, double lo, double hi) const {
    const auto& p = std::get<SmoothSineParams>(spec_.params());
    auto df = [&p](double x) { return p.degree + p.epsilon * std::cos(2.0 * std::numbers::pi * x); };
    return solve_increasing_newton([this](double x) { return sine_lift(x); }, df, target, lo, hi,
                                   options_.tolerance)
        .mid();
  }

  void sample_slopes() {
    constexpr int n = 4096;
    min_slope_ = std::numeric_limits<double>::infinity();
    max_slope_ = 0.0;
    double prev = lift(0.0);
    for (int j = 1; j <= n; ++j) {
      const double cur = lift(static_cast<double>(j) / n);
      const double slope = (cur - prev) * n;
      min_slope_ = std::min(min_slope_, slope);
      max_slope_ = std::max(max_slope_, slope);
      prev = cur;
    }
  }

  CircleMapSpec spec_;
  SolverOptions options_;
  int degree_ = 0;
  std::vector<double> cuts_;
  std::vector<double> lengths_;
  double min_slope_ = 1.0;
  double max_slope_ = 1.0;
  std::shared_ptr<const CircleMap> base_;
};

/// Spec of the map with lift H^-1 o G o H. Both inputs must validate; the
/// result has the degree of `base` and fixes 0.
inline CircleMapSpec make_conjugated(const CircleMapSpec& base, const CircleHomeoSpec& homeo) {
  if (auto r = validate(base); !r.ok()) throw ValidationError(r.summary());
  if (auto r = validate(homeo); !r.ok()) throw ValidationError(r.summary());
  return CircleMapSpec::conjugated(base, homeo);
}

/// F^-n(y): n single-step inversions of the lift as a homeomorphism of the
/// real line, each on the branch selected by the integer part of its argument.
inline double global_inverse_lift(const CircleMap& map, double y, int n,
                                  int depth_cap = defaults::depth_cap) {
  if (n < 1) throw std::invalid_argument("global_inverse_lift needs n >= 1");
  if (n > depth_cap)
    throw CapExceeded("inverse depth " + std::to_string(n) + " exceeds depth cap " + std::to_string(depth_cap));
  for (int k = 0; k < n; ++k) y = map.inverse_lift(y);
  return y;
}

// ---------------------------------------------------------------------------

inline ValidationReport validate(const CircleMapSpec& spec, int grid) {
  ValidationReport report{spec.describe(), {}};
  const int d = spec.degree();
  if (d < 2) {
    report.add("degree", 0.0, "degree must be >= 2, got " + std::to_string(d));
    return report;
  }
  switch (spec.kind()) {
    case MapKind::piecewise_linear_full_branch: {
      const auto& cuts = std::get<PiecewiseLinearParams>(spec.params()).cuts;
      double prev = 0.0;
      for (double c : cuts) {
        if (!(c > 0.0 && c < 1.0)) {
          report.add("cuts", c, "cut outside (0, 1)");
        } else if (!(c > prev)) {
          report.add("cuts", c, "cuts not increasing");
        } else if (c - prev < defaults::min_cut_gap) {
          report.add("cuts", c, "cut gap below " + std::to_string(defaults::min_cut_gap));
        }
        prev = c;
      }
      if (report.ok() && 1.0 - prev < defaults::min_cut_gap)
        report.add("cuts", prev, "cut gap below " + std::to_string(defaults::min_cut_gap));
      if (!report.ok()) return report;
      break;
    }
    case MapKind::linear: break;
    case MapKind::smooth_sine: {
      const auto& p = std::get<SmoothSineParams>(spec.params());
      if (!std::isfinite(p.epsilon)) {
        report.add("parameter", 0.0, "epsilon not finite");
        return report;
      }
      if (!(std::abs(p.epsilon) < d))
        report.add("parameter", 0.0, "|epsilon| must be < degree, got " + std::to_string(p.epsilon));
      break;
    }
    case MapKind::conjugated: {
      const auto& p = std::get<ConjugatedParams>(spec.params());
      if (!p.base) {
        report.add("base", 0.0, "missing base map");
        return report;
      }
      for (auto& v : validate(*p.base, grid).violations) report.add("base." + v.check, v.location, v.detail);
      for (auto& v : validate(p.homeo, grid).violations) report.add("homeo." + v.check, v.location, v.detail);
      if (!report.ok()) return report;
      break;
    }
  }

  // Sampled checks on the lift itself: dense grid plus every breakpoint.
  std::optional<CircleMap> built;
  try {
    built.emplace(CircleMap::unchecked(spec));
  } catch (const SolverError& e) {
    report.add("solver", 0.0, e.what());
    return report;
  }
  const CircleMap& map = *built;
  std::vector<double> points = detail::unit_grid(grid);
  for (double c : map.cuts()) points.push_back(c);
  detail::check_increasing([&map](double x) { return map.lift(x); }, points, report);
  if (!report.ok()) return report;

  const double tol = defaults::validation_tolerance;
  if (std::abs(map.lift(0.0)) > tol) report.add("fixes_zero", 0.0, "F(0) != 0");
  if (std::abs(map.lift(1.0) - d) > tol * d) report.add("degree", 1.0, "F(1) != d");
  for (int i = 1; i < d; ++i) {
    const double c = map.cuts()[static_cast<std::size_t>(i)];
    const double err = std::abs(map.lift(c) - i);
    if (err > tol * d + map.max_slope() * map.solver_tolerance())
      report.add("surjectivity", c, "F(c_i) - i = " + std::to_string(err));
  }
  for (int j = 0; j < 16; ++j) {
    const double x = -2.0 + 0.29 * j;
    const double gap = map.lift(x + 1.0) - map.lift(x) - d;
    if (std::abs(gap) > tol * std::max(1.0, std::abs(map.lift(x))))
      report.add("periodicity", x, "F(x+1) - F(x) - d = " + std::to_string(gap));
  }
  return report;
}

}  // namespace circlebench
