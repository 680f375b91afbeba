#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "circlebench/circle_map.hpp"
#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/word.hpp"

namespace circlebench {

/// Resource caps shared by every partition-level computation.
struct Limits {
  int depth_cap = defaults::depth_cap;
  std::uint64_t cell_cap = defaults::cell_cap;
  double work_cap = defaults::work_cap;
};

/// The cylinder I_w of the level-n Markov partition. `length` is the product
/// of branch lengths for piecewise-linear maps (exact to rounding even when the
/// interval is far below endpoint resolution) and right - left otherwise.
/// `radius` bounds the absolute error of each endpoint.
struct CylinderInterval {
  Word word;
  double left = 0.0;
  double right = 1.0;
  double length = 1.0;
  double radius = 0.0;

  [[nodiscard]] int level() const { return word.level(); }
  [[nodiscard]] bool contains(double x) const { return left <= x && x <= right; }
};

namespace detail {

/// d^n, or CapExceeded when it passes `cap`.
inline std::uint64_t level_size(int degree, int level, std::uint64_t cap) {
  std::uint64_t cells = 1;
  for (int k = 0; k < level; ++k) {
    if (cells > cap / static_cast<std::uint64_t>(degree))
      throw CapExceeded("level " + std::to_string(level) + " of a degree-" + std::to_string(degree) +
                        " map exceeds the cell cap of " + std::to_string(cap) + " cylinders");
    cells *= static_cast<std::uint64_t>(degree);
  }
  if (cells > cap)
    throw CapExceeded("level " + std::to_string(level) + " exceeds the cell cap of " + std::to_string(cap));
  return cells;
}

inline void check_word(const CircleMap& map, const Word& word, const Limits& limits) {
  if (word.level() > limits.depth_cap)
    throw CapExceeded("word of length " + std::to_string(word.level()) + " exceeds depth cap " +
                      std::to_string(limits.depth_cap));
  for (int s : word)
    if (s < 0 || s >= map.degree())
      throw std::invalid_argument("symbol " + std::to_string(s) + " not below degree " +
                                  std::to_string(map.degree()));
}

/// F_w^-1(y) = F_{i_0}^-1 o ... o F_{i_{n-1}}^-1 (y): the point of I_w that
/// f^n sends to y.
inline double pull_back(const CircleMap& map, const Word& word, double y) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = map.inverse_branch(*it, y);
  return y;
}

/// Level-(n+1) endpoints from level-n endpoints: I_{iw} = F_i^-1(I_w). Each
/// interior endpoint is computed exactly once and shared by both neighbours.
inline std::vector<double> refine_endpoints(const CircleMap& map, const std::vector<double>& prev) {
  const int d = map.degree();
  std::vector<double> next;
  next.reserve(static_cast<std::size_t>(d) * (prev.size() - 1) + 1);
  for (int i = 0; i < d; ++i) {
    next.push_back(map.cuts()[static_cast<std::size_t>(i)]);
    for (std::size_t m = 1; m + 1 < prev.size(); ++m) next.push_back(map.inverse_branch(i, prev[m]));
  }
  next.push_back(1.0);
  return next;
}

inline std::vector<double> refine_lengths(const CircleMap& map, const std::vector<double>& prev) {
  std::vector<double> next;
  next.reserve(static_cast<std::size_t>(map.degree()) * prev.size());
  for (double len : map.branch_lengths())
    for (double p : prev) next.push_back(len * p);
  return next;
}

inline std::vector<double> differences(const std::vector<double>& endpoints) {
  std::vector<double> out(endpoints.size() - 1);
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = endpoints[m + 1] - endpoints[m];
  return out;
}

}  // namespace detail

/// I_w, by pulling [0, 1] back through the inverse branches i_{n-1}, ..., i_0.
inline CylinderInterval interval_of_word(const CircleMap& map, const Word& word,
                                         const Limits& limits = {}) {
  detail::check_word(map, word, limits);
  CylinderInterval out{word, detail::pull_back(map, word, 0.0), detail::pull_back(map, word, 1.0), 1.0,
                       map.endpoint_radius(word.level())};
  if (map.is_piecewise_linear()) {
    for (int s : word) out.length *= map.branch_lengths()[static_cast<std::size_t>(s)];
  } else {
    out.length = out.right - out.left;
  }
  return out;
}

/// Itinerary word of x at level n. A point shared by two cylinders belongs to
/// the right-hand one; x = 1 belongs to the last cylinder.
inline Word word_of_point(const CircleMap& map, double x, int level, const Limits& limits = {}) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("word_of_point needs x in [0, 1]");
  if (level > limits.depth_cap)
    throw CapExceeded("level " + std::to_string(level) + " exceeds depth cap " + std::to_string(limits.depth_cap));
  const int d = map.degree();
  Word w;
  for (int k = 0; k < level; ++k) {
    int symbol = 0;
    if (x >= 1.0) {
      symbol = d - 1;
    } else {
      for (int j = 1; j < d; ++j) {
        if (detail::pull_back(map, w, map.cuts()[static_cast<std::size_t>(j)]) <= x) symbol = j;
        else break;
      }
    }
    w.push_back(symbol);
  }
  return w;
}

/// Sorted endpoints of the level-n partition: d^n + 1 points from 0 to 1.
inline std::vector<double> level_endpoints(const CircleMap& map, int level, const Limits& limits = {}) {
  detail::level_size(map.degree(), level, limits.cell_cap);
  std::vector<double> endpoints{0.0, 1.0};
  for (int k = 0; k < level; ++k) endpoints = detail::refine_endpoints(map, endpoints);
  return endpoints;
}

/// Lengths |I_w| of all level-n cylinders, in lexicographic word order.
inline std::vector<double> level_lengths(const CircleMap& map, int level, const Limits& limits = {}) {
  detail::level_size(map.degree(), level, limits.cell_cap);
  if (map.is_piecewise_linear()) {
    std::vector<double> lengths{1.0};
    for (int k = 0; k < level; ++k) lengths = detail::refine_lengths(map, lengths);
    return lengths;
  }
  return detail::differences(level_endpoints(map, level, limits));
}

/// All d^n cylinders of level n, left to right (lexicographic word order).
inline std::vector<CylinderInterval> enumerate_level(const CircleMap& map, int level,
                                                     const Limits& limits = {}) {
  const auto endpoints = level_endpoints(map, level, limits);
  const auto lengths = level_lengths(map, level, limits);
  const double radius = map.endpoint_radius(level);
  std::vector<CylinderInterval> cells;
  cells.reserve(lengths.size());
  for (std::size_t m = 0; m < lengths.size(); ++m)
    cells.push_back({Word::from_index(m, map.degree(), level), endpoints[m], endpoints[m + 1], lengths[m], radius});
  return cells;
}

/// |I_{sigma*(w)}| / |I_w| for every level-n word w (n >= 1), lexicographic order.
inline std::vector<double> parent_child_ratios(const CircleMap& map, int level, const Limits& limits = {}) {
  if (level < 1) throw std::invalid_argument("parent_child_ratios needs level >= 1");
  const auto child = level_lengths(map, level, limits);
  const auto parent = level_lengths(map, level - 1, limits);
  const auto d = static_cast<std::size_t>(map.degree());
  std::vector<double> ratios(child.size());
  for (std::size_t m = 0; m < child.size(); ++m) ratios[m] = parent[m / d] / child[m];
  return ratios;
}

/// max over 1 <= n <= n_max and all level-n words of |I_{sigma*(w)}| / |I_w|.
/// A sampled lower bound for the bounded-geometry constant.
inline double bounded_geometry_constant(const CircleMap& map, int n_max, const Limits& limits = {}) {
  detail::level_size(map.degree(), n_max, limits.cell_cap);
  const auto d = static_cast<std::size_t>(map.degree());
  double worst = 0.0;
  std::vector<double> parent{1.0};
  std::vector<double> endpoints{0.0, 1.0};
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> child;
    if (map.is_piecewise_linear()) {
      child = detail::refine_lengths(map, parent);
    } else {
      endpoints = detail::refine_endpoints(map, endpoints);
      child = detail::differences(endpoints);
    }
    for (std::size_t m = 0; m < child.size(); ++m) worst = std::max(worst, parent[m / d] / child[m]);
    parent = std::move(child);
  }
  return worst;
}

/// tau_n = max |I_w| over level-n words.
inline double mesh(const CircleMap& map, int level, const Limits& limits = {}) {
  const auto lengths = level_lengths(map, level, limits);
  return *std::max_element(lengths.begin(), lengths.end());
}

struct MarkovReport {
  int level = 0;
  double tolerance = 0.0;
  double worst_residual = 0.0;  // max distance of f^n(endpoint) from the fixed point
  Word worst_word;
  double tiling_defect = 0.0;   // |sum of lengths - 1|
  std::vector<std::string> failures;

  [[nodiscard]] bool ok() const { return failures.empty(); }
};

/// Checks that the level-n cylinders tile [0, 1] and that every endpoint is a
/// preimage of 0 under f^n.
inline MarkovReport verify_markov(const CircleMap& map, int level, double tol, const Limits& limits = {}) {
  MarkovReport report;
  report.level = level;
  report.tolerance = tol;
  const auto endpoints = level_endpoints(map, level, limits);
  if (endpoints.front() != 0.0) report.failures.push_back("first endpoint is not 0");
  if (endpoints.back() != 1.0) report.failures.push_back("last endpoint is not 1");
  for (std::size_t m = 0; m + 1 < endpoints.size(); ++m) {
    if (!(endpoints[m] < endpoints[m + 1])) {
      report.failures.push_back("cylinder " + Word::from_index(m, map.degree(), level).to_string() +
                                " is empty or reversed");
      break;
    }
  }
  const auto lengths = level_lengths(map, level, limits);
  double total = 0.0;
  for (double len : lengths) total += len;
  report.tiling_defect = std::abs(total - 1.0);
  if (report.tiling_defect > static_cast<double>(lengths.size()) * 1e-12)
    report.failures.push_back("lengths do not sum to 1");

  for (std::size_t m = 0; m < endpoints.size(); ++m) {
    double y = endpoints[m];
    for (int k = 0; k < level; ++k) y = map.lift(y);
    const double residual = std::abs(y - std::round(y));
    if (residual > report.worst_residual) {
      report.worst_residual = residual;
      const std::size_t cell = std::min(m, lengths.size() - 1);
      report.worst_word = Word::from_index(cell, map.degree(), level);
    }
  }
  if (report.worst_residual > tol)
    report.failures.push_back("endpoint " + report.worst_word.to_string() + " misses f^-n(0) by " +
                              std::to_string(report.worst_residual));
  return report;
}

}  // namespace circlebench
