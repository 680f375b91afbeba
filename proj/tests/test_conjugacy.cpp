#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "circlebench/conjugacy.hpp"

using namespace circlebench;

namespace {

CircleMap falpha(double a) { return CircleMap::create(CircleMapSpec::falpha(a)); }
CircleMap linear(int d) { return CircleMap::create(CircleMapSpec::linear(d)); }
CircleMap smooth(int d, double eps) { return CircleMap::create(CircleMapSpec::smooth_sine(d, eps)); }

}  // namespace

TEST(ConjugacyEval, SelfConjugacyIsIdentity) {
  const auto e = conjugacy_eval(falpha(0.6), falpha(0.6), 0.37, 1e-8);
  EXPECT_TRUE(e.converged);
  EXPECT_LE(e.lo, 0.37);
  EXPECT_GE(e.hi, 0.37);
  EXPECT_LE(e.width(), 1e-8);
}

TEST(ConjugacyEval, EndpointsMapExactly) {
  const Conjugacy h(falpha(0.6), linear(2));
  const auto a = h.eval(0.6, 1e-8);
  EXPECT_EQ(a.lo, 0.5);
  EXPECT_EQ(a.hi, 0.5);
  const auto b = h.eval(0.84, 1e-8);
  EXPECT_NEAR(b.mid(), 0.75, 1e-15);
  EXPECT_EQ(h.eval(0.0, 1e-8).mid(), 0.0);
  EXPECT_EQ(h.eval(1.0, 1e-8).mid(), 1.0);
}

TEST(ConjugacyEval, DepthCapFlagsNonConvergence) {
  const Conjugacy h(smooth(2, 0.5), linear(2), {4});
  const auto e = h.eval(0.3, 1e-8);
  EXPECT_FALSE(e.converged);
  EXPECT_EQ(e.depth, 4);
  EXPECT_LE(e.lo, e.hi);
}

TEST(ConjugacyEval, Errors) {
  EXPECT_THROW((Conjugacy(linear(2), linear(3))), ValidationError);
  const Conjugacy h(linear(2), linear(2));
  EXPECT_THROW((void)h.eval(1.5, 1e-8), std::invalid_argument);
  EXPECT_THROW((void)h.eval(0.5, 0.0), std::invalid_argument);
}

TEST(EndpointTable, Examples) {
  const auto same = endpoint_table(smooth(2, 0.5), smooth(2, 0.5), 6);
  for (std::size_t m = 0; m < same.size(); ++m) EXPECT_EQ(same.f_endpoints[m], same.g_endpoints[m]);

  const auto t = endpoint_table(falpha(0.6), linear(2), 2);
  const std::vector<std::pair<double, double>> expected{{0, 0}, {0.36, 0.25}, {0.6, 0.5}, {0.84, 0.75}, {1, 1}};
  ASSERT_EQ(t.size(), expected.size());
  for (std::size_t m = 0; m < t.size(); ++m) {
    EXPECT_NEAR(t.f_endpoints[m], expected[m].first, 1e-15);
    EXPECT_NEAR(t.g_endpoints[m], expected[m].second, 1e-15);
  }
  EXPECT_EQ(t.word(1).to_string(), "01");
  EXPECT_TRUE(t.word(4).empty());

  const auto back = endpoint_table(linear(2), falpha(0.6), 2);
  EXPECT_EQ(back.f_endpoints, t.g_endpoints);
  EXPECT_EQ(back.g_endpoints, t.f_endpoints);
}

TEST(Residual, Examples) {
  const double tol = 1e-8;
  EXPECT_LE(conjugacy_residual(smooth(2, 0.5), smooth(2, 0.5), 64, tol).max_residual, 2 * tol);
  const auto r = conjugacy_residual(falpha(0.6), linear(2), 1024, tol);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.max_residual, 1e-6);
}

TEST(Residual, RecoversKnownConjugacy) {
  const auto H = CircleHomeoSpec::sine(0.5);
  const auto f = CircleMap::create(make_conjugated(CircleMapSpec::linear(2), H));
  const auto g = linear(2);
  const Conjugacy h(f, g);
  double worst = 0.0;
  for (int j = 0; j < 97; ++j) {
    const double x = (j + 0.31) / 97.0;
    worst = std::max(worst, std::abs(h.eval(x, 1e-9).mid() - H.lift(x)));
  }
  EXPECT_LE(worst, 1e-8);
}

TEST(ConjugacyProperty, MonotoneAndEquivariant) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double a = 0.2 + 0.6 * unit(rng);
    const double eps = 1.5 * (2.0 * unit(rng) - 1.0);
    const Conjugacy h(falpha(a), smooth(2, eps));
    std::vector<double> xs(40);
    for (double& x : xs) x = unit(rng);
    std::sort(xs.begin(), xs.end());
    double prev = -1.0;
    for (double x : xs) {
      const auto e = h.eval(x, 1e-9);
      EXPECT_TRUE(e.converged);
      EXPECT_GE(e.mid(), prev - 1e-9);
      prev = e.mid();
      const double lhs = h.eval(circle_reduce(h.from().lift(x)), 1e-10).mid();
      const double rhs = circle_reduce(h.to().lift(e.mid()));
      EXPECT_LE(circle_distance(lhs, rhs), 1e-7) << "a=" << a << " eps=" << eps << " x=" << x;
    }
  }
}

TEST(CircleHelpers, DistanceAndReduce) {
  EXPECT_NEAR(circle_distance(0.01, 0.99), 0.02, 1e-15);
  EXPECT_NEAR(circle_distance(2.25, 0.25), 0.0, 1e-15);
  EXPECT_NEAR(circle_reduce(-0.25), 0.75, 1e-16);
}
