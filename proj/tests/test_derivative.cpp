#include "nobeta/derivative.hpp"
#include "nobeta/generators.hpp"
#include "nobeta/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace nobeta;

namespace {

constexpr double kPi = std::numbers::pi;

// Largest angular gap of points around c; a set on a circle is contained in
// no open half circle iff the gap is at most pi.
double maxAngularGap(const std::vector<Vec>& pts, const Vec& c) {
  std::vector<double> a;
  for (const auto& p : pts) a.push_back(std::atan2(p(1) - c(1), p(0) - c(0)));
  std::sort(a.begin(), a.end());
  double gap = a.front() + 2 * kPi - a.back();
  for (size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
  return gap;
}

TargetSet sequenceTarget() {
  TargetSet t;
  t.eps = 0.05;
  t.points.push_back(vec({0, 0}));
  for (int n = 1; n <= 50; ++n) t.points.push_back(vec({1.0 / n, 0}));
  return t;
}

// Arcs sampled finer than eps plus scattered points, eps = 0.05.
TargetSet randomMixed(CounterRng& rng) {
  TargetSet t;
  t.eps = 0.05;
  int arcs = 1 + static_cast<int>(rng.below(2));
  for (int k = 0; k < arcs; ++k) {
    Vec c = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    double R = rng.uniform(0.4, 0.9), a0 = rng.uniform(0, 2 * kPi);
    int m = 8 + static_cast<int>(rng.below(8));
    double step = 0.03 / R;
    for (int i = 0; i < m; ++i)
      t.points.push_back(c + R * vec({std::cos(a0 + i * step), std::sin(a0 + i * step)}));
  }
  for (int i = 0; i < 5; ++i) t.points.push_back(vec({rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)}));
  // Drop near-duplicates.
  TargetSet out = t;
  out.points.clear();
  for (const auto& p : t.points) {
    bool dup = false;
    for (const auto& q : out.points) dup = dup || (p - q).norm() < 1e-3;
    if (!dup) out.points.push_back(p);
  }
  return out;
}


std::vector<int> ids(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST(GoodCopy, CircleAntipodalChord) {
  auto disk = gen::ball(2);
  TargetSet t = gen::circle(200);
  t.eps = 0.1;
  Homothet q{vec({std::sqrt(0.75), 0}), 0.5};
  auto c = isGoodCopy(disk, q, t);
  EXPECT_TRUE(c.good);
  ASSERT_GE(c.projected.size(), 2u);
  // Oracle: projected points are on a circle; full cover iff no open half circle holds them.
  EXPECT_LE(maxAngularGap(c.projected, q.center), kPi + 1e-9);
  EXPECT_NEAR(c.coverScale, 0.5, 1e-6);
  for (int i : c.limitPoints) EXPECT_LE(std::abs(signedDistance(disk, q, t.points[i])), t.eps);
}

TEST(GoodCopy, ScatterHasNoLimitPoints) {
  auto disk = gen::ball(2);
  TargetSet t = gen::scatter(20, 5, 0.02);
  CounterRng rng(11);
  for (int k = 0; k < 200; ++k) {
    Homothet q{vec({rng.uniform(-1, 1), rng.uniform(-1, 1)}), rng.uniform(0.01, 2)};
    auto c = isGoodCopy(disk, q, t);
    EXPECT_FALSE(c.good);
    EXPECT_TRUE(c.limitPoints.empty());
  }
}

TEST(GoodCopy, SequenceWithZeroOnBoundary) {
  auto disk = gen::ball(2);
  TargetSet t = sequenceTarget();
  double worst = 0.0;
  for (double r : {0.2, 0.3, 0.5, 0.75, 1.0, 2.0}) {
    for (int k = 0; k < 32; ++k) {
      double th = 2 * kPi * k / 32;
      Homothet q{r * vec({std::cos(th), std::sin(th)}), r};
      auto c = isGoodCopy(disk, q, t);
      EXPECT_FALSE(c.good) << r << " " << th;
      worst = std::max(worst, c.coverScale / r);
    }
  }
  EXPECT_LT(worst, 0.75);
}

TEST(GoodCopy, SquareFacetClause) {
  // Points along the bottom edge of a square copy are limits along that facet.
  auto sq = gen::square();
  TargetSet t;
  t.eps = 0.1;
  for (int i = 0; i <= 25; ++i) t.points.push_back(vec({-1 + 0.08 * i, -1}));
  auto c = isGoodCopy(sq, Homothet{vec({0, 0}), 1}, t);
  EXPECT_EQ(c.limitPoints.size(), t.points.size());
  EXPECT_FALSE(c.hyperplaneWitnesses.empty());
  EXPECT_TRUE(c.good);
  // The same edge against a larger square: only a strictly smaller cover is needed.
  auto big = isGoodCopy(sq, Homothet{vec({0, 0.95}), 1.95}, t);
  EXPECT_FALSE(big.good);
}

TEST(GoodCopy, Errors) {
  auto disk = gen::ball(2);
  TargetSet t = gen::circle(10);
  EXPECT_THROW(isGoodCopy(disk, Homothet{vec({0, 0}), 0.0}, t), InvalidArgument);
  EXPECT_THROW(isGoodCopy(disk, Homothet{vec({0, 0}), 1.0}, t, 0.0), InvalidArgument);
  EXPECT_THROW(isGoodCopy(disk, Homothet{vec({0, 0}), 1.0}, t, 1.0), InvalidArgument);
}

TEST(DerivativeStep, ScatterRemovedAtOnce) {
  auto disk = gen::ball(2);
  TargetSet t = gen::scatter(20, 3, 0.02);
  auto st = derivativeStep(disk, t);
  EXPECT_TRUE(st.kept.empty());
  EXPECT_EQ(st.removed.size(), 20u);
}

TEST(DerivativeStep, CircleKeepsEverything) {
  auto disk = gen::ball(2);
  TargetSet t = gen::circle(200);
  auto st = derivativeStep(disk, t);
  EXPECT_EQ(st.kept.size(), 200u);
  EXPECT_TRUE(st.badBalls.empty());
  EXPECT_EQ(st.inconclusiveBalls, 0);
}

TEST(DerivativeStep, SegmentWithIsolatedPoint) {
  auto disk = gen::ball(2);
  TargetSet t = gen::segment(30, vec({-1, 0}), vec({1, 0}));
  t.points.push_back(vec({0, 1.5}));
  auto st = derivativeStep(disk, t);
  EXPECT_EQ(st.removed, std::vector<int>{30});
  EXPECT_EQ(st.kept.size(), 30u);
}

TEST(DerivativeStep, SquareBodyOnCircle) {
  auto sq = gen::square();
  TargetSet t = gen::circle(120);
  auto st = derivativeStep(sq, t);
  EXPECT_EQ(st.kept.size(), 120u);
}

TEST(RankTrace, Scatter) {
  auto disk = gen::ball(2);
  auto tr = rankTrace(disk, gen::scatter(20, 9, 0.02), 5);
  EXPECT_TRUE(tr.complete);
  EXPECT_EQ(tr.rank, 1);
  EXPECT_TRUE(tr.fixpoint.empty());
  for (int s : tr.stageOf) EXPECT_EQ(s, 0);
}

TEST(RankTrace, Circle) {
  auto disk = gen::ball(2);
  auto tr = rankTrace(disk, gen::circle(200), 5);
  EXPECT_EQ(tr.rank, 0);
  EXPECT_EQ(tr.fixpointSize(), 200);
}

TEST(RankTrace, DecoratedCircle) {
  auto disk = gen::ball(2);
  TargetSet t = gen::decoratedCircle(200);
  ASSERT_GT(t.points.size(), 200u);
  auto tr = rankTrace(disk, t, 5);
  ASSERT_TRUE(tr.complete);
  EXPECT_EQ(tr.rank, 1);
  EXPECT_EQ(tr.fixpoint, ids(200));
  for (int i = 200; i < static_cast<int>(t.points.size()); ++i) EXPECT_EQ(tr.stageOf[i], 0);
  // Fixpoint is its own derivative.
  auto again = derivativeStep(disk, t.subset(tr.fixpoint));
  EXPECT_TRUE(again.removed.empty());
}

TEST(RankTrace, StageCap) {
  auto disk = gen::ball(2);
  auto tr = rankTrace(disk, gen::scatter(10, 2, 0.02), 1);
  EXPECT_TRUE(tr.complete);
  TargetSet t = gen::decoratedCircle(200);
  auto capped = rankTrace(disk, t, 1);
  EXPECT_FALSE(capped.complete);
  EXPECT_EQ(capped.rank, -1);
  EXPECT_EQ(capped.stagePoints(1).size(), 200u);
  EXPECT_THROW(rankTrace(disk, t, 0), InvalidArgument);
}

TEST(DerivativeStep, CertificatesAreCoherent) {
  auto disk = gen::ball(2);
  CounterRng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    TargetSet t = randomMixed(rng);
    auto st = derivativeStep(disk, t);
    std::set<int> removed(st.removed.begin(), st.removed.end());
    for (const auto& b : st.badBalls) {
      EXPECT_EQ(b.tooFew, b.ball.members.size() < 2);
      if (!b.tooFew) EXPECT_FALSE(b.refuted.empty());
      for (int i : b.ball.members) EXPECT_TRUE(removed.count(i));
      // Refuted copies recheck as not good and fit inside the ball.
      for (size_t k = 0; k < b.refuted.size(); k += 7) {
        EXPECT_FALSE(isGoodCopy(disk, b.refuted[k], t).good);
        EXPECT_TRUE(copyInsideBall(disk, b.refuted[k], b.ball.center, b.ball.radius));
      }
    }
    for (int i : st.removed) {
      const auto& b = st.badBalls[st.removedBy.at(i)].ball;
      EXPECT_LT((t.points[i] - b.center).norm(), b.radius);
    }
  }
}

TEST(DerivativeStep, AntitoneAndMonotoneOnNestedTargets) {
  auto disk = gen::ball(2);
  CounterRng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    TargetSet B = randomMixed(rng);
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(B.points.size()); ++i)
      if (rng.uniform() < 0.7) keep.push_back(i);
    if (keep.empty()) keep.push_back(0);
    TargetSet A = B.subset(keep);
    StepOptions opt;
    opt.family = B.points;
    auto sa = derivativeStep(disk, A, opt);
    auto sb = derivativeStep(disk, B, opt);
    // Antitone: isolated points (no eps-neighbor) never survive.
    for (int i : sa.kept) {
      bool hasNeighbor = false;
      for (int j = 0; j < static_cast<int>(A.points.size()); ++j)
        hasNeighbor = hasNeighbor || (j != i && (A.points[i] - A.points[j]).norm() <= A.eps);
      EXPECT_TRUE(hasNeighbor) << trial;
    }
    EXPECT_EQ(sa.kept.size() + sa.removed.size(), A.points.size());
    // Monotone: survivors of A survive in B.
    std::set<int> keptB(sb.kept.begin(), sb.kept.end());
    for (int i : sa.kept) EXPECT_TRUE(keptB.count(keep[i])) << "trial " << trial << " point " << keep[i];
  }
}

TEST(GoodCopySearch, Examples) {
  auto disk = gen::ball(2);
  TargetSet t = gen::circle(60);
  Region region{Homothet{vec({0, 0}), 3.0}, Homothet{vec({1, 0}), 0.05}};
  auto found = goodCopySearch(disk, region, t);
  ASSERT_TRUE(found.has_value());
  EXPECT_TRUE(found->good);
  EXPECT_TRUE(copyInRegion(disk, found->copy, region));
  EXPECT_TRUE(separation(disk, found->copy, *region.excluded).disjoint());

  EXPECT_FALSE(goodCopySearch(disk, Region{Homothet{vec({0, 0}), 3.0}, std::nullopt},
                              gen::scatter(20, 4, 0.02))
                   .has_value());
  EXPECT_FALSE(goodCopySearch(disk, Region{Homothet{vec({0, 0}), 1e-3}, std::nullopt}, t).has_value());
}
