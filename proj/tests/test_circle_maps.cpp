#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circlebench/circle_map.hpp"
#include "circlebench/root_solve.hpp"
#include "circlebench/spec_json.hpp"

using namespace circlebench;

namespace {

CircleMap falpha(double a) { return CircleMap::create(CircleMapSpec::falpha(a)); }
CircleMap linear(int d) { return CircleMap::create(CircleMapSpec::linear(d)); }
CircleMap smooth(int d, double eps) { return CircleMap::create(CircleMapSpec::smooth_sine(d, eps)); }
CircleMap conjugated(double c) {
  return CircleMap::create(make_conjugated(CircleMapSpec::linear(2), CircleHomeoSpec::sine(c)));
}

}  // namespace

TEST(Lift, Examples) {
  EXPECT_DOUBLE_EQ(linear(2).lift(0.3), 0.6);
  EXPECT_NEAR(falpha(0.6).lift(0.8), 1.5, 1e-15);
  EXPECT_EQ(smooth(2, 0.5).lift(0.0), 0.0);
}

TEST(Lift, EquivarianceAndNormalization) {
  for (const auto& map : {falpha(0.6), linear(3), smooth(2, 0.5), conjugated(0.5)}) {
    EXPECT_NEAR(map.lift(0.0), 0.0, 1e-12) << map.spec().describe();
    for (double x : {-1.7, -0.3, 0.1, 0.45, 0.99, 2.2})
      EXPECT_NEAR(map.lift(x + 1.0), map.lift(x) + map.degree(), 1e-11) << map.spec().describe();
  }
}

TEST(Lift, ConjugatedOracle) {
  const auto map = conjugated(0.5);
  EXPECT_NEAR(map.lift(0.3), 0.82276886542603209352, 1e-12);
  EXPECT_NEAR(map.lift(0.5), 1.0, 1e-12);
  EXPECT_EQ(map.lift(0.0), 0.0);
}

TEST(Lift, IdentityHomeoMatchesBase) {
  const auto plain = linear(2);
  const auto wrapped = CircleMap::create(make_conjugated(CircleMapSpec::linear(2), CircleHomeoSpec::identity()));
  for (int j = 0; j <= 1000; ++j) {
    const double x = j / 1000.0;
    EXPECT_NEAR(wrapped.lift(x), plain.lift(x), 1e-12);
  }
}

TEST(Lift, FullBranchLinearity) {
  const auto map = CircleMap::create(CircleMapSpec::piecewise_linear({0.25, 0.7}));
  const auto c = map.cuts();
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(map.lift(c[i]), i, 1e-15);
    const double mid = 0.5 * (c[i] + c[i + 1]);
    EXPECT_NEAR(map.lift(mid), i + 0.5, 1e-14);
  }
}

TEST(InverseBranch, Examples) {
  EXPECT_DOUBLE_EQ(linear(2).inverse_branch(1, 0.5), 0.75);
  EXPECT_NEAR(falpha(0.6).inverse_branch(0, 0.6), 0.36, 1e-16);
  EXPECT_EQ(smooth(2, 0.5).inverse_branch(0, 0.0), 0.0);
}

TEST(InverseBranch, SmoothOracle) {
  const auto map = smooth(2, 0.5);
  EXPECT_NEAR(map.inverse_branch(1, 0.3), 0.68668117473018266163, 1e-12);
  EXPECT_NEAR(map.inverse_branch(0, 0.7), 0.31331882526981733837, 1e-12);
}

TEST(InverseBranch, RejectsBadBranch) {
  EXPECT_THROW((void)linear(2).inverse_branch(2, 0.5), std::out_of_range);
  EXPECT_THROW((void)linear(2).inverse_branch(-1, 0.5), std::out_of_range);
}

TEST(InverseBranch, RoundTripProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& map : {falpha(0.6), falpha(0.9), linear(3), smooth(2, 0.5), smooth(3, -1.2), conjugated(0.5)}) {
    for (int trial = 0; trial < 200; ++trial) {
      const double y = unit(rng);
      const int branch = static_cast<int>(unit(rng) * map.degree());
      const double x = map.inverse_branch(branch, y);
      EXPECT_GE(x, map.cuts()[branch] - 1e-15);
      EXPECT_LE(x, map.cuts()[branch + 1] + 1e-15);
      EXPECT_NEAR(map.lift(x), branch + y, 1e-11) << map.spec().describe();
    }
  }
}

TEST(GlobalInverse, Examples) {
  EXPECT_NEAR(global_inverse_lift(linear(2), 0.8, 3), 0.1, 1e-16);
  EXPECT_NEAR(global_inverse_lift(falpha(0.6), 0.2, 2), 0.072, 1e-16);
  EXPECT_NEAR(global_inverse_lift(falpha(0.6), -0.2, 1), -0.08, 1e-16);
  EXPECT_NEAR(global_inverse_lift(smooth(2, 0.5), 0.8, 3), 0.061495362388697228466, 1e-12);
}

TEST(GlobalInverse, Caps) {
  EXPECT_THROW((void)global_inverse_lift(linear(2), 0.5, 0), std::invalid_argument);
  EXPECT_THROW((void)global_inverse_lift(linear(2), 0.5, 5, 4), CapExceeded);
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(CircleMapSpec::falpha(0.6)).ok());
  const auto unordered = validate(CircleMapSpec::piecewise_linear({0.7, 0.3}));
  EXPECT_TRUE(unordered.has("cuts"));
  EXPECT_NE(unordered.summary().find("not increasing"), std::string::npos);
  EXPECT_TRUE(validate(CircleMapSpec::smooth_sine(2, 2.5)).has("monotonicity"));
}

TEST(Validate, Rejections) {
  EXPECT_TRUE(validate(CircleMapSpec::linear(1)).has("degree"));
  EXPECT_TRUE(validate(CircleMapSpec::piecewise_linear({1.2})).has("cuts"));
  EXPECT_TRUE(validate(CircleMapSpec::piecewise_linear({0.5, 0.5 + 1e-12})).has("cuts"));
  EXPECT_TRUE(validate(CircleMapSpec::conjugated(CircleMapSpec::linear(2), CircleHomeoSpec::sine(1.5))).has(
      "homeo.parameter"));
  EXPECT_THROW((void)CircleMap::create(CircleMapSpec::smooth_sine(2, 2.5)), ValidationError);
  EXPECT_THROW((void)make_conjugated(CircleMapSpec::linear(2), CircleHomeoSpec::sine(-1.0)), ValidationError);
}

TEST(Validate, SmoothBoundaryProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(unit(rng) * 3);
    const double eps = (2.0 * unit(rng) - 1.0) * 0.98 * d;
    EXPECT_TRUE(validate(CircleMapSpec::smooth_sine(d, eps)).ok()) << d << " " << eps;
    EXPECT_FALSE(validate(CircleMapSpec::smooth_sine(d, d * (1.05 + unit(rng)))).ok());
  }
}

TEST(Slopes, PiecewiseLinear) {
  const auto map = falpha(0.6);
  EXPECT_NEAR(map.min_slope(), 1.0 / 0.6, 1e-15);
  EXPECT_NEAR(map.max_slope(), 2.5, 1e-15);
  EXPECT_EQ(map.degree(), 2);
  EXPECT_EQ(map.cuts().size(), 3u);
}

TEST(Homeo, SineFactorsAndInverse) {
  const auto h = CircleHomeoSpec::composition({{0.3}, {-0.4}});
  for (double x : {-0.7, 0.0, 0.2, 0.5, 0.93, 1.4}) {
    EXPECT_NEAR(h.lift(x + 1.0), h.lift(x) + 1.0, 1e-14);
    EXPECT_NEAR(h.inverse_lift(h.lift(x)), x, 1e-12);
  }
  EXPECT_DOUBLE_EQ(h.lift(0.2), SineHomeo{0.3}.lift(SineHomeo{-0.4}.lift(0.2)));
  EXPECT_TRUE(CircleHomeoSpec::identity().is_identity());
}

TEST(Solver, BracketAndClamp) {
  const auto cube = [](double x) { return x * x * x; };
  const auto b = solve_increasing(cube, 0.125, 0.0, 1.0, 1e-14);
  EXPECT_LE(b.width(), 1e-14);
  EXPECT_NEAR(b.mid(), 0.5, 1e-14);
  EXPECT_THROW((void)solve_increasing(cube, 2.0, 0.0, 1.0), SolverError);
  const auto d = solve_increasing_newton(cube, [](double x) { return 3 * x * x; }, 0.027, 0.0, 1.0, 1e-14);
  EXPECT_NEAR(d.mid(), 0.3, 1e-14);
}

TEST(SpecJson, RoundTripAndDiagnostics) {
  const auto spec = map_from_json(parse_json_text(
      R"({"kind":"conjugated","base":{"kind":"smooth_sine","degree":3,"epsilon":0.25},"homeo":{"kind":"composition","factors":[{"kind":"sine_homeo","c":0.1}]}})",
      "inline"));
  EXPECT_EQ(spec.kind(), MapKind::conjugated);
  EXPECT_EQ(spec.degree(), 3);
  EXPECT_EQ(to_json(map_from_json(to_json(spec))), to_json(spec));

  const auto expect_schema = [](const char* text, const char* fragment) {
    try {
      (void)map_from_json(parse_json_text(text, "inline"));
      ADD_FAILURE() << "accepted " << text;
    } catch (const SchemaError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_schema(R"({"kind":"piecewise_linear_full_branch","cuts":[0.6],"degree":2})", "$.degree");
  expect_schema(R"({"kind":"piecewise_linear_full_branch","cuts":[0.2,"x"]})", "$.cuts[1]");
  expect_schema(R"({"kind":"linear","degree":2,"extra":1})", "$.extra");
  expect_schema(R"({"kind":"conjugated","base":{"kind":"linear"},"homeo":{"kind":"sine_homeo","c":0.5}})",
                "$.base.degree");
  expect_schema(R"({"kind":"spiral"})", "$.kind");
  expect_schema(R"({"kind":"linear",)", "inline");
  EXPECT_THROW((void)load_map_spec("/nonexistent/map.json"), IoError);
}
