#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "circlebench/circle_map.hpp"
#include "circlebench/conjugacy.hpp"
#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/partition.hpp"
#include "circlebench/word.hpp"

namespace circlebench {

/// Anything that evaluates a circle-homeomorphism lift H on the real line.
template <class H>
concept HomeoLift = requires(const H& h, double x) {
  { h(x) } -> std::convertible_to<double>;
};

struct IdentityLift {
  double operator()(double x) const { return x; }
};

/// A computed conjugacy seen as a lift: H(x) = floor(x) + midpoint of the
/// enclosure of h(frac x) at the given tolerance.
struct ConjugacyLift {
  Conjugacy conjugacy;
  double tolerance = defaults::conjugacy_tolerance;

  double operator()(double x) const { return conjugacy.lift(x, tolerance); }
};

// ---------------------------------------------------------------------------
// Quasisymmetry and symmetry

/// (H(x+t) - H(x)) / (H(x) - H(x-t)).
template <HomeoLift H>
double qs_ratio(const H& h, double x, double t) {
  if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("qs_ratio needs 0 < t <= 0.5");
  const double center = h(x);
  const double right = h(x + t) - center;
  const double left = center - h(x - t);
  if (std::abs(left) < defaults::ratio_floor)
    throw ResolutionExhausted("qs_ratio denominator below floor at x=" + std::to_string(x) +
                              ", t=" + std::to_string(t));
  return right / left;
}

struct ModulusRow {
  double scale = 0.0;
  double value = 0.0;
  double argmax_x = 0.0;
};

/// Sampled modulus table. Values are suprema over a finite grid, hence lower
/// bounds for the true quantity; `note` says so in every report.
struct ModulusReport {
  std::string subject;
  std::string note;
  int grid = 0;
  double tolerance = 0.0;
  std::vector<ModulusRow> rows;
};

/// t = 2^-j for j = 1..j_max.
inline std::vector<double> dyadic_scales(int j_max = defaults::modulus_max_dyadic_exponent) {
  std::vector<double> scales;
  for (int j = 1; j <= j_max; ++j) scales.push_back(std::ldexp(1.0, -j));
  return scales;
}

/// For each t: max over x = k / grid of max(r - 1, 1/r - 1), r = qs_ratio(h, x, t).
template <HomeoLift H>
ModulusReport symmetry_modulus(const H& h, std::span<const double> scales, int grid = defaults::modulus_grid,
                               double tolerance = 0.0) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] < scales[i - 1])) throw std::invalid_argument("scales must be strictly decreasing");
  ModulusReport report;
  report.note = "sampled supremum over a finite x-grid: a lower bound for the true symmetry modulus";
  report.grid = grid;
  report.tolerance = tolerance;
  for (double t : scales) {
    ModulusRow row{t, 0.0, 0.0};
    for (int k = 0; k < grid; ++k) {
      const double x = static_cast<double>(k) / grid;
      const double r = qs_ratio(h, x, t);
      if (!(r > 0.0))
        throw ResolutionExhausted("non-positive increment at x=" + std::to_string(x) + ", t=" + std::to_string(t));
      const double dev = std::max(r - 1.0, 1.0 / r - 1.0);
      if (dev > row.value) {
        row.value = dev;
        row.argmax_x = x;
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Endomorphism distortion and measure

/// (F^-n(x+t) - F^-n(x)) / (F^-n(x) - F^-n(x-t)).
inline double uqs_ratio_endo(const CircleMap& map, double x, double t, int n, const Limits& limits = {}) {
  if (!(t > 0.0)) throw std::invalid_argument("uqs_ratio_endo needs t > 0");
  const double center = global_inverse_lift(map, x, n, limits.depth_cap);
  const double right = global_inverse_lift(map, x + t, n, limits.depth_cap) - center;
  const double left = center - global_inverse_lift(map, x - t, n, limits.depth_cap);
  if (std::abs(left) < defaults::ratio_floor)
    throw ResolutionExhausted("uqs_ratio_endo denominator below floor at n=" + std::to_string(n));
  return right / left;
}

struct UnitInterval {
  double a = 0.0;
  double b = 1.0;
};

/// |f^-1([a, b])| = sum over branches of the preimage lengths.
inline double preimage_length(const CircleMap& map, double a, double b) {
  double total = 0.0;
  for (int i = 0; i < map.degree(); ++i) total += map.inverse_branch(i, b) - map.inverse_branch(i, a);
  return total;
}

/// max over the intervals of | |f^-1([a, b])| - (b - a) |.
inline double measure_deviation(const CircleMap& map, std::span<const UnitInterval> intervals) {
  double worst = 0.0;
  for (const auto& iv : intervals) {
    if (!(0.0 <= iv.a && iv.a <= iv.b && iv.b <= 1.0))
      throw std::invalid_argument("measure intervals must satisfy 0 <= a <= b <= 1");
    worst = std::max(worst, std::abs(preimage_length(map, iv.a, iv.b) - (iv.b - iv.a)));
  }
  return worst;
}

/// The 2^level intervals [k / 2^level, (k+1) / 2^level].
inline std::vector<UnitInterval> dyadic_intervals(int level) {
  const auto count = static_cast<std::uint64_t>(1) << level;
  std::vector<UnitInterval> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k)
    out.push_back({std::ldexp(static_cast<double>(k), -level), std::ldexp(static_cast<double>(k + 1), -level)});
  return out;
}

// ---------------------------------------------------------------------------
// Dilatation extremes

struct CellMaximum {
  Word cell;        // level-m word
  double max_ratio = 0.0;
  Word argmax;      // level-n descendant attaining it
};

struct DilatationReport {
  int level = 0;
  int coarse_level = 0;
  double Phi = 1.0;  // max |I_w(g)| / |I_w(f)| at `level`
  double phi = 1.0;  // min of the same ratio
  Word argmax_word;
  Word argmin_word;
  std::vector<double> Phi_by_level;  // index k-1 holds Phi_k, k = 1..level
  std::vector<double> phi_by_level;
  std::vector<CellMaximum> cells;
};

/// Ratios |h(I_w)| / |I_w| = |I_w(g)| / |I_w(f)| over all cylinders up to
/// `level`. Ties resolve to the lexicographically first word.
inline DilatationReport dilatation_report(const CircleMap& f, const CircleMap& g, int level, int coarse_level,
                                          const Limits& limits = {}) {
  if (f.degree() != g.degree())
    throw ValidationError("dilatation needs maps of equal degree, got " + std::to_string(f.degree()) + " and " +
                          std::to_string(g.degree()));
  if (level < 1) throw std::invalid_argument("dilatation level must be >= 1");
  if (coarse_level < 0 || coarse_level >= level)
    throw std::invalid_argument("coarse level must satisfy 0 <= m < n");
  detail::level_size(f.degree(), level, limits.cell_cap);

  const int d = f.degree();
  DilatationReport report;
  report.level = level;
  report.coarse_level = coarse_level;
  std::vector<double> ratios;
  std::size_t arg_hi = 0, arg_lo = 0;
  for (int k = 1; k <= level; ++k) {
    const auto lf = level_lengths(f, k, limits);
    const auto lg = level_lengths(g, k, limits);
    ratios.resize(lf.size());
    arg_hi = arg_lo = 0;
    for (std::size_t m = 0; m < lf.size(); ++m) {
      ratios[m] = lg[m] / lf[m];
      if (ratios[m] > ratios[arg_hi]) arg_hi = m;
      if (ratios[m] < ratios[arg_lo]) arg_lo = m;
    }
    report.Phi_by_level.push_back(ratios[arg_hi]);
    report.phi_by_level.push_back(ratios[arg_lo]);
  }
  report.Phi = report.Phi_by_level.back();
  report.phi = report.phi_by_level.back();
  report.argmax_word = Word::from_index(arg_hi, d, level);
  report.argmin_word = Word::from_index(arg_lo, d, level);

  const std::size_t per_cell = detail::level_size(d, level - coarse_level, limits.cell_cap);
  const std::size_t cell_count = ratios.size() / per_cell;
  for (std::size_t c = 0; c < cell_count; ++c) {
    std::size_t best = c * per_cell;
    for (std::size_t m = best; m < (c + 1) * per_cell; ++m)
      if (ratios[m] > ratios[best]) best = m;
    report.cells.push_back({Word::from_index(c, d, coarse_level), ratios[best], Word::from_index(best, d, level)});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Tail sums over block words that avoid a fixed word

struct TailSumRow {
  int k = 0;
  double sum = 0.0;            // S_k, also the stage-k cover measure of C(I_w)
  double bound = 0.0;          // (1 - A)^k with the empirical A
  double geometry_bound = 0.0; // (1 - C^-n)^k with the sampled bounded-geometry constant
  double count = 0.0;          // (d^n - 1)^k block words
};

struct TailSumReport {
  Word base;
  int block_length = 0;
  double A = 0.0;               // min observed |I_{u w'}| / |I_u| over visited blocks u, level-n w'
  double geometry_constant = 0.0;
  int geometry_level = 0;
  double geometry_A = 0.0;      // C^-n
  bool closed_form = false;
  std::vector<TailSumRow> rows;
};

struct TailSumOptions {
  Limits limits{};
  bool force_enumeration = false;
  int geometry_level = defaults::tail_sum_geometry_level;
};

namespace detail {

struct TailSumWalk {
  const CircleMap& map;
  const std::vector<Word>& blocks;  // all level-n words, lexicographic
  std::size_t excluded = 0;
  int k_max = 0;
  std::vector<double>& sums;        // sums[j] accumulates S_j
  double& min_ratio;

  // refined = endpoints of I_{u w'} for every level-n word w', u at depth j.
  void visit(const std::vector<double>& refined, int depth) {
    const double parent = refined.back() - refined.front();
    sums[static_cast<std::size_t>(depth)] += parent;
    if (depth == k_max) return;
    for (std::size_t m = 0; m + 1 < refined.size(); ++m)
      min_ratio = std::min(min_ratio, (refined[m + 1] - refined[m]) / parent);
    std::vector<double> child(depth + 1 == k_max ? 2 : refined.size());
    for (std::size_t v = 0; v < blocks.size(); ++v) {
      if (v == excluded) continue;
      if (child.size() == 2) {
        child[0] = pull_back(map, blocks[v], refined.front());
        child[1] = pull_back(map, blocks[v], refined.back());
      } else {
        for (std::size_t m = 0; m < refined.size(); ++m) child[m] = pull_back(map, blocks[v], refined[m]);
      }
      visit(child, depth + 1);
    }
  }
};

}  // namespace detail

/// S_k = sum over block words w^1..w^k, each w^j != w, of |I_{w^1...w^k}|, for
/// k = 1..k_max. Piecewise-linear maps use |I_{uv}| = |I_u| |I_v|, which gives
/// S_k = (1 - |I_w|)^k; other maps enumerate all blocks within the work cap.
inline TailSumReport tail_sum(const CircleMap& map, const Word& base, int k_max, const TailSumOptions& options = {}) {
  if (base.empty()) throw std::invalid_argument("tail_sum needs a non-empty base word");
  if (k_max < 1) throw std::invalid_argument("tail_sum needs k_max >= 1");
  detail::check_word(map, base, options.limits);
  const int n = base.level();
  const int d = map.degree();
  const auto blocks_per_step = static_cast<double>(detail::level_size(d, n, options.limits.cell_cap) - 1);

  TailSumReport report;
  report.base = base;
  report.block_length = n;
  report.closed_form = map.is_piecewise_linear() && !options.force_enumeration;
  std::vector<double> sums(static_cast<std::size_t>(k_max) + 1, 0.0);

  if (report.closed_form) {
    const auto lengths = level_lengths(map, n, options.limits);
    const double avoided = 1.0 - lengths[base.index(d)];
    report.A = *std::min_element(lengths.begin(), lengths.end());
    sums[0] = 1.0;
    for (int k = 1; k <= k_max; ++k) sums[static_cast<std::size_t>(k)] = std::pow(avoided, k);
  } else {
    const double work = std::pow(blocks_per_step, k_max);
    if (work > options.limits.work_cap)
      throw CapExceeded("tail sum needs " + std::to_string(work) + " block evaluations, cap is " +
                        std::to_string(options.limits.work_cap));
    std::vector<Word> blocks;
    const auto total = static_cast<std::uint64_t>(blocks_per_step) + 1;
    for (std::uint64_t v = 0; v < total; ++v) blocks.push_back(Word::from_index(v, d, n));
    report.A = std::numeric_limits<double>::infinity();
    detail::TailSumWalk walk{map, blocks, static_cast<std::size_t>(base.index(d)), k_max, sums, report.A};
    walk.visit(level_endpoints(map, n, options.limits), 0);
  }

  const int bg_level = std::max(1, std::min(options.geometry_level, n * k_max));
  report.geometry_level = bg_level;
  report.geometry_constant = bounded_geometry_constant(map, bg_level, options.limits);
  report.geometry_A = std::pow(report.geometry_constant, -n);
  for (int k = 1; k <= k_max; ++k) {
    report.rows.push_back({k, sums[static_cast<std::size_t>(k)], std::pow(1.0 - report.A, k),
                           std::pow(1.0 - report.geometry_A, k), std::pow(blocks_per_step, k)});
  }
  return report;
}

}  // namespace circlebench
