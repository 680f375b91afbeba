#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "circlebench/partition.hpp"

using namespace circlebench;

namespace {

CircleMap falpha(double a) { return CircleMap::create(CircleMapSpec::falpha(a)); }
CircleMap linear(int d) { return CircleMap::create(CircleMapSpec::linear(d)); }
CircleMap smooth(int d, double eps) { return CircleMap::create(CircleMapSpec::smooth_sine(d, eps)); }

// Full-branch piecewise-linear maps with uniform cuts, rejecting gaps below min_gap.
CircleMapSpec random_full_branch(std::mt19937_64& rng, double min_gap) {
  std::uniform_int_distribution<int> degree(2, 5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int d = degree(rng);
    std::vector<double> cuts(d - 1);
    for (double& c : cuts) c = unit(rng);
    std::sort(cuts.begin(), cuts.end());
    double prev = 0.0;
    bool ok = true;
    for (double c : cuts) {
      ok = ok && c - prev >= min_gap;
      prev = c;
    }
    if (ok && 1.0 - prev >= min_gap) return CircleMapSpec::piecewise_linear(cuts);
  }
}

}  // namespace

TEST(Word, ParseIndexAndShifts) {
  const auto w = Word::parse("012");
  EXPECT_EQ(w.level(), 3);
  EXPECT_EQ(w.to_string(), "012");
  EXPECT_EQ(w.index(3), 5u);
  EXPECT_EQ(Word::from_index(5, 3, 3), w);
  EXPECT_EQ(left_shift(w).to_string(), "12");
  EXPECT_EQ(drop_last(w).to_string(), "01");
  EXPECT_TRUE(left_shift(Word::parse("0")).empty());
  EXPECT_THROW((void)left_shift(Word{}), std::invalid_argument);
  EXPECT_THROW((void)drop_last(Word{}), std::invalid_argument);
  EXPECT_THROW((void)Word::parse("0!"), std::invalid_argument);
  EXPECT_LT(Word::parse("01"), Word::parse("10"));
}

TEST(IntervalOfWord, Examples) {
  const auto a = interval_of_word(linear(2), Word::parse("01"));
  EXPECT_DOUBLE_EQ(a.left, 0.25);
  EXPECT_DOUBLE_EQ(a.right, 0.5);
  const auto b = interval_of_word(falpha(0.6), Word::parse("01"));
  EXPECT_NEAR(b.left, 0.36, 1e-16);
  EXPECT_NEAR(b.right, 0.6, 1e-16);
  EXPECT_NEAR(b.length, 0.24, 1e-16);
  const auto e = interval_of_word(smooth(2, 0.5), Word{});
  EXPECT_EQ(e.left, 0.0);
  EXPECT_EQ(e.right, 1.0);
}

TEST(IntervalOfWord, Errors) {
  EXPECT_THROW((void)interval_of_word(linear(2), Word::parse("02")), std::invalid_argument);
  Limits tight;
  tight.depth_cap = 3;
  EXPECT_THROW((void)interval_of_word(linear(2), Word::parse("0101"), tight), CapExceeded);
}

TEST(WordOfPoint, Examples) {
  EXPECT_EQ(word_of_point(linear(2), 0.3, 2).to_string(), "01");
  EXPECT_EQ(word_of_point(falpha(0.6), 0.5, 2).to_string(), "01");
  for (int n : {1, 4, 9}) EXPECT_EQ(word_of_point(smooth(2, 0.5), 0.0, n), Word::from_index(0, 2, n));
  EXPECT_EQ(word_of_point(falpha(0.6), 0.6, 1).to_string(), "1");
  EXPECT_EQ(word_of_point(falpha(0.6), 1.0, 3).to_string(), "111");
  EXPECT_THROW((void)word_of_point(linear(2), 1.5, 2), std::invalid_argument);
}

TEST(LevelEndpoints, Examples) {
  const auto lin = level_endpoints(linear(2), 3);
  ASSERT_EQ(lin.size(), 9u);
  for (int k = 0; k <= 8; ++k) EXPECT_DOUBLE_EQ(lin[k], k / 8.0);

  const auto cells = enumerate_level(falpha(0.6), 1);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].left, 0.0);
  EXPECT_NEAR(cells[0].right, 0.6, 1e-16);
  EXPECT_EQ(cells[1].right, 1.0);

  const auto f2 = level_endpoints(falpha(0.6), 2);
  const std::vector<double> expected{0.0, 0.36, 0.6, 0.84, 1.0};
  ASSERT_EQ(f2.size(), expected.size());
  for (std::size_t m = 0; m < f2.size(); ++m) EXPECT_NEAR(f2[m], expected[m], 1e-15);
}

TEST(LevelEndpoints, CellCap) {
  Limits tight;
  tight.cell_cap = 1000;
  EXPECT_NO_THROW((void)level_endpoints(linear(2), 9, tight));
  EXPECT_THROW((void)level_endpoints(linear(2), 10, tight), CapExceeded);
}

TEST(BoundedGeometry, Examples) {
  EXPECT_NEAR(bounded_geometry_constant(linear(2), 6), 2.0, 1e-12);
  EXPECT_NEAR(bounded_geometry_constant(falpha(0.6), 8), 2.5, 1e-12);
  EXPECT_NEAR(bounded_geometry_constant(falpha(0.9), 8), 10.0, 1e-9);
  for (double r : parent_child_ratios(falpha(0.6), 7))
    EXPECT_TRUE(std::abs(r - 1.0 / 0.6) < 1e-9 || std::abs(r - 2.5) < 1e-9) << r;
}

TEST(Mesh, Examples) {
  EXPECT_NEAR(mesh(linear(2), 5), 1.0 / 32, 1e-16);
  EXPECT_NEAR(mesh(falpha(0.6), 3), 0.216, 1e-15);
  for (int n = 1; n <= 10; ++n)
    EXPECT_LE(mesh(falpha(0.6), n + 1) / mesh(falpha(0.6), n), 0.6 + 1e-12);
}

TEST(Markov, Examples) {
  EXPECT_TRUE(verify_markov(linear(2), 10, 1e-9).ok());
  EXPECT_TRUE(verify_markov(falpha(0.6), 10, 1e-9).ok());
  EXPECT_TRUE(verify_markov(smooth(2, 0.5), 8, 1e-9).ok());
  EXPECT_THROW((void)CircleMap::create(CircleMapSpec::smooth_sine(2, 2.5)), ValidationError);
}

TEST(PartitionProperty, RandomFullBranchMaps) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto map = CircleMap::create(random_full_branch(rng, 0.02));
    const int d = map.degree();
    const int top = d == 2 ? 8 : (d == 3 ? 6 : 5);
    std::vector<double> coarse{0.0, 1.0};
    for (int n = 1; n <= top; ++n) {
      const auto ends = level_endpoints(map, n);
      const auto lengths = level_lengths(map, n);
      // Tiling: lengths sum to 1 and match endpoint gaps.
      double total = 0.0;
      for (std::size_t m = 0; m < lengths.size(); ++m) {
        total += lengths[m];
        EXPECT_NEAR(lengths[m], ends[m + 1] - ends[m], 1e-10);
        EXPECT_GT(ends[m + 1], ends[m]);
      }
      EXPECT_NEAR(total, 1.0, 1e-10);
      // Refinement: every level-(n-1) endpoint reappears at index d*m.
      for (std::size_t m = 0; m < coarse.size(); ++m) EXPECT_NEAR(ends[m * d], coarse[m], 1e-10);
      // Dynamics: f maps I_w onto I_{sigma(w)}.
      const auto w = Word::from_index(static_cast<std::uint64_t>(unit(rng) * lengths.size()), d, n);
      const auto cell = interval_of_word(map, w);
      const auto image = interval_of_word(map, left_shift(w));
      const int lead = *w.begin();
      EXPECT_NEAR(map.lift(cell.left) - lead, image.left, 1e-10);
      EXPECT_NEAR(map.lift(cell.right) - lead, image.right, 1e-10);
      // Itinerary of an interior point recovers its word.
      const double x = cell.left + 0.5 * (cell.right - cell.left);
      EXPECT_EQ(word_of_point(map, x, n), w);
      coarse = ends;
    }
    // Forward iteration amplifies endpoint error by the slope per step.
    EXPECT_TRUE(verify_markov(map, 3, 1e-10).ok());
  }
}
