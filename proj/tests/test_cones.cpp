#include "nobeta/cones.hpp"
#include "nobeta/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace nobeta;

namespace {

constexpr double kPi = std::numbers::pi;

ConeFamily quadrants() { return buildConeFamily({vec({1, 0}), vec({0, 1})}); }

std::vector<Vec> circleSamples(CounterRng& rng, int n) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    double a = rng.uniform(0, 2 * kPi);
    pts.push_back(vec({std::cos(a), std::sin(a)}));
  }
  return pts;
}

}  // namespace

TEST(ConeFamily, Examples) {
  EXPECT_EQ(quadrants().size(), 2);
  EXPECT_EQ(buildConeFamily({vec({1, 0})}).size(), 1);
  EXPECT_EQ(buildConeFamily({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}).size(), 4);
  EXPECT_THROW(buildConeFamily({vec({1, 0}), vec({-2, 0})}), InvalidArgument);
  EXPECT_THROW(buildConeFamily({vec({0, 0})}), InvalidArgument);
  for (const auto& p : quadrants().patterns) EXPECT_EQ(p[0], 1);
}

TEST(ConeFamily, ThreeDimensionalPatternsAreFullDimensional) {
  // Four generic planes in R^3 cut at most 14 regions, i.e. 7 pairs, out of 8 patterns.
  auto fam = buildConeFamily({vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1}), vec({1, 1, 1})});
  EXPECT_EQ(fam.size(), 7);
  for (int c = 0; c < fam.size(); ++c) {
    auto m = coneOf(fam, Vec::Zero(3), fam.representatives[c]);
    EXPECT_EQ(m.cone, c);
    EXPECT_EQ(m.sign, 1);
    EXPECT_TRUE(m.interior);
  }
}

TEST(ConeOf, Examples) {
  auto fam = quadrants();
  auto a = coneOf(fam, vec({0, 0}), vec({1, 2}));
  EXPECT_EQ(fam.patterns[a.cone], (std::vector<int>{1, 1}));
  EXPECT_EQ(a.sign, 1);
  EXPECT_TRUE(a.interior);
  auto b = coneOf(fam, vec({0, 0}), vec({-1, -2}));
  EXPECT_EQ(b.cone, a.cone);
  EXPECT_EQ(b.sign, -1);
  auto c = coneOf(fam, vec({0, 0}), vec({1, 0}));
  EXPECT_FALSE(c.interior);
  EXPECT_GE(c.cone, 0);
  EXPECT_THROW(coneOf(fam, vec({1, 1}), vec({1, 1})), InvalidArgument);
}

TEST(ConeOf, CoverAndNegationSymmetry) {
  CounterRng rng(2);
  std::vector<ConeFamily> fams = {quadrants(), refinedFamily2D(0.3),
                                  buildConeFamily({vec({1, 0, 0}), vec({0, 1, 0}), vec({1, 1, 1})})};
  for (const auto& fam : fams) {
    for (int k = 0; k < 2000; ++k) {
      Vec v(fam.dim);
      for (int j = 0; j < fam.dim; ++j) v(j) = rng.normal();
      auto m = coneOf(fam, Vec::Zero(fam.dim), v);
      auto n = coneOf(fam, Vec::Zero(fam.dim), -v);
      ASSERT_GE(m.cone, 0);
      EXPECT_EQ(m.cone, n.cone);
      EXPECT_EQ(m.sign, -n.sign);
      // Exact membership: signs match the stored pattern.
      for (size_t i = 0; i < fam.normals.size(); ++i)
        EXPECT_GT(m.sign * fam.patterns[m.cone][i] * fam.normals[i].dot(v), 0.0);
    }
  }
}

TEST(Refined, StrictWidth) {
  auto f = refinedFamily2D(kPi / 4);
  // Four lines would give cones of width exactly pi/4; strict width needs five.
  EXPECT_EQ(f.normals.size(), 5u);
  EXPECT_EQ(f.size(), 5);
  EXPECT_LT(maxAngularWidth2D(f), kPi / 4);
  CounterRng rng(9);
  for (int k = 0; k < 200; ++k) {
    double a = rng.uniform(1e-3, kPi / 2);
    EXPECT_LT(maxAngularWidth2D(refinedFamily2D(a)), a);
  }
  EXPECT_THROW(refinedFamily2D(0.0), InvalidArgument);
  EXPECT_THROW(refinedFamily2D(-1.0), InvalidArgument);
}

TEST(Refined, SeedsAppear) {
  auto f = refinedFamily2D(kPi / 2, {vec({1, 1})});
  bool found = false;
  for (const auto& n : f.normals) found = found || std::abs(n.dot(vec({1, 1}).normalized())) < 1e-12;
  EXPECT_TRUE(found);
  EXPECT_LT(maxAngularWidth2D(f), kPi / 2);
}

TEST(Refined, AngleFromDelta) {
  double th = angleForDelta(1.0);
  EXPECT_NEAR(th, kPi / 3, 1e-12);
  // Bisection oracle on 1 - cos t = 1/2.
  double lo = 0, hi = kPi;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    (1 - std::cos(m) < 0.5 ? lo : hi) = m;
  }
  EXPECT_NEAR(th, lo, 1e-12);
  auto f = refinedFamily2D(th);
  EXPECT_GE(f.normals.size(), 3u);
  EXPECT_LT(maxAngularWidth2D(f), th);
}

TEST(Thinning, MonochromaticLine) {
  std::vector<Vec> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(vec({0.1 * i, 0}));
  auto data = ColoredPointSet::fromFunction(pts, 1, [](int, int) { return 1; }, 0.3, 1);
  auto r = thinningHomogeneous(data);
  ASSERT_TRUE(r.success);
  EXPECT_EQ(r.B.size(), 10u);
  EXPECT_EQ(r.color, 1);
  EXPECT_TRUE(verifyPartialHomogeneity(data, r.B, 1));
  EXPECT_FALSE(verifyPartialHomogeneity(data, {3}, 1));
}

TEST(Thinning, ParityColoring) {
  std::vector<Vec> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(vec({static_cast<double>(i % 4), static_cast<double>(i / 4)}));
  auto data = ColoredPointSet::fromFunction(pts, 2, [](int a, int b) { return 1 + (b - a) % 2; }, 100.0, 1);
  auto r = thinningHomogeneous(data);
  ASSERT_TRUE(r.success);
  EXPECT_TRUE(verifyPartialHomogeneity(data, r.B, r.color));
}

TEST(Thinning, InfeasibleParameters) {
  std::vector<Vec> pts = {vec({0, 0}), vec({1, 0})};
  auto data = ColoredPointSet::fromFunction(pts, 2, [](int, int) { return 1; }, 1.0, 1);
  auto r = thinningHomogeneous(data);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.status, "infeasible-parameters");
}

TEST(Thinning, CircleConeColoring) {
  std::vector<Vec> pts;
  for (int i = 0; i < 64; ++i) {
    double a = 2 * kPi * i / 64;
    pts.push_back(vec({std::cos(a), std::sin(a)}));
  }
  auto data = ColoredPointSet::fromCones(pts, quadrants(), 0.25, 1);
  auto r = thinningHomogeneous(data, ThinningMode::BothSides);
  ASSERT_TRUE(r.success) << r.status;
  EXPECT_GE(r.B.size(), 16u);
  EXPECT_TRUE(verifyPartialHomogeneity(data, r.B, r.color, ThinningMode::BothSides, &r.reference));
}

TEST(Thinning, SoundOnRandomInstances) {
  CounterRng rng(77);
  int successes = 0;
  for (int inst = 0; inst < 2000; ++inst) {
    int n = 8 + static_cast<int>(rng.below(57));
    int colors = 1 + static_cast<int>(rng.below(4));
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(vec({rng.uniform(), rng.uniform()}));
    std::vector<int> table(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) table[a * n + b] = 1 + static_cast<int>(rng.below(colors));
    auto data = ColoredPointSet::fromFunction(pts, colors, [&](int a, int b) { return table[a * n + b]; },
                                              rng.uniform(0.1, 0.6), static_cast<int>(rng.below(3)));
    auto r = thinningHomogeneous(data);
    if (r.success) {
      ++successes;
      EXPECT_TRUE(verifyPartialHomogeneity(data, r.B, r.color));
    }
  }
  EXPECT_GT(successes, 100);
}
