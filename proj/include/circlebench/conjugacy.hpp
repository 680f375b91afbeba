#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "circlebench/circle_map.hpp"
#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/partition.hpp"
#include "circlebench/word.hpp"

namespace circlebench {

/// Certified interval [lo, hi] containing h(x), found at word depth `depth`.
struct ConjugacyEnclosure {
  double x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int depth = 0;
  bool converged = true;  // false when the depth cap stopped refinement first

  [[nodiscard]] double width() const { return hi - lo; }
  [[nodiscard]] double mid() const { return lo + 0.5 * (hi - lo); }
};

/// h restricted to the level-n endpoints: f_endpoints[m] maps to g_endpoints[m].
struct EndpointTable {
  int level = 0;
  int degree = 0;
  std::vector<double> f_endpoints;
  std::vector<double> g_endpoints;

  [[nodiscard]] std::size_t size() const { return f_endpoints.size(); }
  /// Word of the cylinder whose left end is endpoint m ("" for the final point 1).
  [[nodiscard]] Word word(std::size_t m) const {
    if (m + 1 >= f_endpoints.size()) return {};
    return Word::from_index(m, degree, level);
  }
};

struct ConjugacyOptions {
  int depth_cap = defaults::conjugacy_depth_cap;
  int probe_level = defaults::conjugacy_probe_level;
};

/// The conjugacy h with h o f = g o h and h(0) = 0, evaluated by word
/// matching: x lies in I_w(f) for its itinerary w, so h(x) lies in I_w(g).
class Conjugacy {
 public:
  /// Throws ValidationError on a degree mismatch or when the mesh of either map
  /// fails to decrease up to the probe level.
  Conjugacy(CircleMap f, CircleMap g, ConjugacyOptions options = {})
      : f_(std::move(f)), g_(std::move(g)), options_(options) {
    if (f_.degree() != g_.degree())
      throw ValidationError("conjugacy needs maps of equal degree, got " + std::to_string(f_.degree()) +
                            " and " + std::to_string(g_.degree()));
    probe(f_, "from");
    probe(g_, "to");
  }

  [[nodiscard]] const CircleMap& from() const { return f_; }
  [[nodiscard]] const CircleMap& to() const { return g_; }
  [[nodiscard]] const ConjugacyOptions& options() const { return options_; }

  /// Refines the itinerary of x until the matching g-cylinder is no wider than
  /// tol. Points that are partition endpoints of f map to the matching
  /// g-endpoint with zero width. If the depth cap is hit first, the best
  /// enclosure comes back with converged = false.
  [[nodiscard]] ConjugacyEnclosure eval(double x, double tol) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("conjugacy_eval needs x in [0, 1]");
    if (!(tol > 0.0)) throw std::invalid_argument("conjugacy tolerance must be positive");
    if (x == 0.0 || x == 1.0) return {x, x, x, 0, true};

    const int d = f_.degree();
    const auto fc = f_.cuts();
    const auto gc = g_.cuts();
    Word w;
    double f_lo = 0.0, f_hi = 1.0, g_lo = 0.0, g_hi = 1.0;
    for (int depth = 1; depth <= options_.depth_cap; ++depth) {
      // Children of I_w(f) are split at F_w^-1(c_j).
      int symbol = 0;
      double next_lo = f_lo;
      double next_hi = f_hi;
      for (int j = 1; j < d; ++j) {
        const double b = detail::pull_back(f_, w, fc[static_cast<std::size_t>(j)]);
        if (b <= x) {
          symbol = j;
          next_lo = b;
        } else {
          next_hi = b;
          break;
        }
      }
      const auto s = static_cast<std::size_t>(symbol);
      if (symbol > 0 && next_lo == x) {
        const double image = detail::pull_back(g_, w, gc[s]);
        return {x, image, image, depth, true};
      }
      g_lo = symbol == 0 ? g_lo : detail::pull_back(g_, w, gc[s]);
      g_hi = symbol == d - 1 ? g_hi : detail::pull_back(g_, w, gc[s + 1]);
      f_lo = next_lo;
      f_hi = next_hi;
      w.push_back(symbol);
      if (g_hi - g_lo <= tol) return {x, g_lo, g_hi, depth, true};
    }
    return {x, g_lo, g_hi, options_.depth_cap, false};
  }

  /// Lift H(x) on the real line from the enclosure midpoint.
  [[nodiscard]] double lift(double x, double tol) const {
    const double j = std::floor(x);
    return j + eval(x - j, tol).mid();
  }

 private:
  void probe(const CircleMap& map, const char* role) const {
    double prev = 1.0;
    for (int k = 1; k <= options_.probe_level; ++k) {
      const double tau = mesh(map, k);
      if (!(tau < prev))
        throw ValidationError(std::string("conjugacy '") + role + "' map " + map.spec().describe() +
                              ": mesh does not decay at level " + std::to_string(k));
      prev = tau;
    }
  }

  CircleMap f_;
  CircleMap g_;
  ConjugacyOptions options_;
};

inline ConjugacyEnclosure conjugacy_eval(const CircleMap& f, const CircleMap& g, double x, double tol,
                                         ConjugacyOptions options = {}) {
  return Conjugacy(f, g, options).eval(x, tol);
}

/// Pairs the ordered level-n endpoints of f with those of g.
inline EndpointTable endpoint_table(const CircleMap& f, const CircleMap& g, int level,
                                    const Limits& limits = {}) {
  if (f.degree() != g.degree())
    throw ValidationError("endpoint table needs maps of equal degree, got " + std::to_string(f.degree()) +
                          " and " + std::to_string(g.degree()));
  return {level, f.degree(), level_endpoints(f, level, limits), level_endpoints(g, level, limits)};
}

inline double circle_distance(double a, double b) {
  double gap = std::fmod(std::abs(a - b), 1.0);
  return std::min(gap, 1.0 - gap);
}

inline double circle_reduce(double y) { return y - std::floor(y); }

struct ResidualReport {
  double max_residual = 0.0;
  double argmax_x = 0.0;
  double max_width = 0.0;  // widest enclosure used, for attributing the residual
  bool converged = true;
  int grid_size = 0;
  double tolerance = 0.0;
};

/// max over x = j / grid_size of the circle distance between h(f(x)) and g(h(x)).
inline ResidualReport conjugacy_residual(const Conjugacy& h, int grid_size, double tol) {
  if (grid_size < 1) throw std::invalid_argument("grid size must be positive");
  ResidualReport report;
  report.grid_size = grid_size;
  report.tolerance = tol;
  for (int j = 0; j < grid_size; ++j) {
    const double x = static_cast<double>(j) / grid_size;
    const auto hx = h.eval(x, tol);
    const auto hfx = h.eval(circle_reduce(h.from().lift(x)), tol);
    const double ghx = circle_reduce(h.to().lift(hx.mid()));
    const double residual = circle_distance(hfx.mid(), ghx);
    report.max_width = std::max({report.max_width, hx.width(), hfx.width()});
    report.converged = report.converged && hx.converged && hfx.converged;
    if (residual > report.max_residual) {
      report.max_residual = residual;
      report.argmax_x = x;
    }
  }
  return report;
}

inline ResidualReport conjugacy_residual(const CircleMap& f, const CircleMap& g, int grid_size, double tol,
                                         ConjugacyOptions options = {}) {
  return conjugacy_residual(Conjugacy(f, g, options), grid_size, tol);
}

}  // namespace circlebench
