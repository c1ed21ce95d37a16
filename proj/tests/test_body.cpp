#include "nobeta/body.hpp"
#include "nobeta/boundary.hpp"
#include "nobeta/generators.hpp"
#include "nobeta/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace nobeta;

namespace {

const Homothet kUnit2{Vec::Zero(2), 1.0};

void expectVec(const Vec& a, const Vec& b, double tol = 1e-9) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE((a - b).norm(), tol) << a.transpose() << " vs " << b.transpose();
}

// Independent brute force: smallest scale over a (w, t) grid whose copy covers all points.
double gridMinScale(const ConvexBody& P, const std::vector<Vec>& pts, double lo, double hi, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      Vec w = vec({lo + (hi - lo) * i / n, lo + (hi - lo) * j / n});
      double t = 0;
      for (const auto& p : pts) t = std::max(t, gauge(P, p - w));
      best = std::min(best, t);
    }
  return best;
}

}  // namespace

TEST(Support, UnitDisk) {
  auto r = support(gen::ball(2), vec({1, 0}));
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  expectVec(r.witness, vec({1, 0}));
}

TEST(Support, SquareCorner) {
  auto r = support(gen::square(), vec({1, 1}));
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  expectVec(r.witness, vec({1, 1}));
}

TEST(Support, TriangleVertex) {
  auto P = ConvexBody::polytope({vec({-1, -1}), vec({2, -1}), vec({-1, 2})});
  // Diameter 3*sqrt(2) exceeds 4, so the body is stored rescaled to diameter 2.
  ASSERT_TRUE(P.rescaled());
  auto r = support(P, vec({0, 1}));
  EXPECT_NEAR(r.value / P.rescaleFactor(), 2.0, 1e-12);
  expectVec(r.witness / P.rescaleFactor(), vec({-1, 2}));
}

TEST(Support, ZeroDirectionRejected) {
  EXPECT_THROW(support(gen::square(), vec({0, 0})), InvalidArgument);
}

TEST(Support, SublinearAndHomogeneous) {
  CounterRng rng(11);
  for (const auto& P : {gen::square(), gen::ball(3), gen::randomPolytope(4, 3, 12), gen::ellipse(2, 1)}) {
    for (int k = 0; k < 200; ++k) {
      Vec u(P.dim()), v(P.dim());
      for (int j = 0; j < P.dim(); ++j) {
        u(j) = rng.normal();
        v(j) = rng.normal();
      }
      EXPECT_LE(support(P, u + v).value, support(P, u).value + support(P, v).value + kTau);
      double lam = rng.uniform(0.1, 5.0);
      EXPECT_NEAR(support(P, lam * u).value, lam * support(P, u).value, 1e-9 * lam);
    }
  }
}

TEST(SignedDistance, Examples) {
  auto disk = gen::ball(2);
  EXPECT_NEAR(signedDistance(disk, kUnit2, vec({0, 0})), -1.0, 1e-12);
  EXPECT_NEAR(signedDistance(disk, kUnit2, vec({2, 0})), 1.0, 1e-12);
  EXPECT_NEAR(signedDistance(gen::square(), kUnit2, vec({0.5, 0})), -0.5, 1e-12);
  EXPECT_NEAR(signedDistance(disk, {vec({1, 1}), 0.0}, vec({1, 3})), 2.0, 1e-12);
}

TEST(MaxChord, Examples) {
  EXPECT_NEAR(maxChord(gen::ball(2), vec({0.3, -2})).length, 2.0, 1e-12);
  auto sq = gen::square();
  auto h = maxChord(sq, vec({1, 0}));
  EXPECT_NEAR(h.length, 2.0, 1e-9);
  EXPECT_NEAR(std::abs(h.chord.y(0) - h.chord.x(0)), 2.0, 1e-9);
  auto d = maxChord(sq, vec({1, 1}));
  EXPECT_NEAR(d.length, 2.0 * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(std::abs(d.chord.x(0)), 1.0, 1e-9);
  EXPECT_THROW(maxChord(sq, vec({0, 0})), InvalidArgument);
}

TEST(MaxChord, DifferenceBodyMatchesLp) {
  CounterRng rng(5);
  for (int s = 0; s < 10; ++s) {
    auto P = gen::randomPolytope(100 + s, 2, 9);
    for (int k = 0; k < 50; ++k) {
      Vec u = vec({rng.normal(), rng.normal()});
      auto a = maxChord(P, u);
      auto b = maxChordLp(P, u);
      EXPECT_NEAR(a.length, b.length, 1e-8);
      EXPECT_NEAR((a.chord.y - a.chord.x).norm(), a.length, 1e-8);
      EXPECT_LE(signedDistance(P, kUnit2, a.chord.x), 1e-9);
      EXPECT_LE(signedDistance(P, kUnit2, a.chord.y), 1e-9);
    }
  }
}

TEST(MaxChord, AtLeastTwiceInradius) {
  for (const auto& P : {gen::square(), gen::regularPolygon(7), gen::randomPolytope(3, 2, 10), gen::ellipse(2, 1)}) {
    double r = inradius(P);
    for (int k = 0; k < 720; ++k) {
      double a = 2 * M_PI * k / 720;
      EXPECT_GE(maxChord(P, vec({std::cos(a), std::sin(a)})).length, 2 * r - kTau);
    }
  }
}

TEST(MaximalSegment, Examples) {
  auto disk = gen::ball(2);
  EXPECT_TRUE(isMaximalSegment(disk, {vec({-1, 0}), vec({1, 0})}));
  EXPECT_FALSE(isMaximalSegment(disk, {vec({-1, 0}), vec({0, 0})}));
  auto sq = gen::square();
  Segment s{vec({-1, 0}), vec({1, 0.5})};
  EXPECT_TRUE(isMaximalSegment(sq, s));
  EXPECT_NEAR(maxChordLp(sq, vec({2, 0.5})).length, s.length(), 1e-9);
  EXPECT_THROW(isMaximalSegment(sq, {vec({0, 0}), vec({3, 0})}), PreconditionViolation);
}

TEST(MinEnclosing, Examples) {
  auto h = minEnclosingHomothet(gen::ball(2), {vec({0, 0}), vec({2, 0})});
  EXPECT_NEAR(h.scale, 1.0, 1e-9);
  expectVec(h.center, vec({1, 0}));
  auto sq = gen::square();
  std::vector<Vec> pts = {vec({0, 0}), vec({3, 1})};
  auto q = minEnclosingHomothet(sq, pts);
  EXPECT_NEAR(q.scale, 1.5, 1e-9);
  expectVec(q.center, vec({1.5, -0.5}), 1e-8);
  EXPECT_NEAR(gridMinScale(sq, pts, -1, 4, 100), 1.5, 1e-9);
  auto one = minEnclosingHomothet(sq, {vec({5, 5})});
  EXPECT_EQ(one.scale, 0.0);
  expectVec(one.center, vec({5, 5}));
  EXPECT_THROW(minEnclosingHomothet(sq, {}), InvalidArgument);
}

TEST(MinEnclosing, NoCoverBelowOptimum) {
  CounterRng rng(21);
  for (int c = 0; c < 40; ++c) {
    auto P = c % 2 ? gen::square() : gen::randomPolytope(c, 2, 7);
    std::vector<Vec> pts;
    int n = 2 + static_cast<int>(rng.below(5));
    for (int i = 0; i < n; ++i) pts.push_back(vec({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    auto h = minEnclosingHomothet(P, pts);
    for (const auto& p : pts) EXPECT_LE(gauge(P, p - h.center), h.scale + 1e-9);
    EXPECT_GE(gridMinScale(P, pts, -1.5, 1.5, 60), h.scale - 10 * kTau);
  }
}

TEST(Hyperplanes, Examples) {
  auto hs = supportingHyperplanesAt(gen::ball(2), vec({1, 0}));
  ASSERT_EQ(hs.size(), 1u);
  expectVec(hs[0].normal, vec({1, 0}));
  auto c = supportingHyperplanesAt(gen::square(), vec({-1, -1}));
  ASSERT_EQ(c.size(), 2u);
  auto e = supportingHyperplanesAt(gen::square(), vec({-1, 0}));
  ASSERT_EQ(e.size(), 1u);
  expectVec(e[0].normal, vec({-1, 0}));
  EXPECT_THROW(supportingHyperplanesAt(gen::square(), vec({0, 0})), PreconditionViolation);
}

TEST(Delta, Disk) {
  auto r = deltaGlobal(gen::ball(2));
  EXPECT_NEAR(r.value, 1.0, 1e-6);
}

TEST(Delta, SquareCornersAndMidpoint) {
  auto sq = gen::square();
  EXPECT_NEAR(deltaAt(sq, vec({-1, -1})).value, 0.0, 1e-12);
  EXPECT_NEAR(deltaGlobal(sq).value, 0.0, 1e-12);
  // Chords from (-1,0) to (1,t), t in [-1,1], against the normal (-1,0).
  double oracle = 1.0;
  for (int k = 0; k <= 20000; ++k) {
    double t = -1.0 + 2.0 * k / 20000;
    oracle = std::min(oracle, 2.0 / std::sqrt(4.0 + t * t));
  }
  auto m = deltaAt(sq, vec({-1, 0}));
  EXPECT_NEAR(m.value, oracle, 1e-6);
  EXPECT_GE(m.value, 1.0 / std::sqrt(2.0));
}

TEST(Delta, EllipsePositive) {
  auto r = deltaGlobal(gen::ellipse(2, 1));
  EXPECT_GT(r.value, 0.1);
}

TEST(Delta, EccentricEllipseTip) {
  // Dense-direction oracle at the tip: maximal chords checked with unit directions only.
  auto P = gen::ellipse(3, 1);
  Vec x = vec({-1, 0});
  auto hs = supportingHyperplanesAt(P, x);
  double oracle = 1.0;
  for (int k = 0; k < 20000; ++k) {
    double a = 2 * M_PI * k / 20000;
    Vec u = vec({std::cos(a), std::sin(a)});
    if (maxChord(P, u).length - chordFrom(P, x, u) > 1e-7) continue;
    for (const auto& h : hs) oracle = std::min(oracle, std::abs(h.normal.dot(u)));
  }
  auto r = deltaAt(P, x);
  EXPECT_GT(r.value, 0.99);
  EXPECT_NEAR(r.value, oracle, 1e-3);
  EXPECT_GT(deltaGlobal(P).value, 0.1);
}

TEST(Exceptional, SquareAndDisk) {
  auto e = exceptionalPoints2D(gen::square());
  EXPECT_EQ(e.F.size(), 4u);
  for (const auto& p : e.F) EXPECT_NEAR(std::abs(p(0)) + std::abs(p(1)), 2.0, 1e-9);
  auto d = exceptionalPoints2D(gen::ball(2));
  EXPECT_TRUE(d.F.empty());
  EXPECT_NEAR(d.delta, 1.0, 1e-6);
  EXPECT_THROW(exceptionalPoints2D(gen::cube()), InvalidArgument);
}

TEST(Tangents, SquareCorner) {
  auto t = tangents2D(gen::square(), vec({1, -1}));
  EXPECT_NEAR(std::abs(t.left.dot(t.right)), 0.0, 1e-9);
}

TEST(ScaleBound, Examples) {
  auto disk = gen::ball(2);
  auto a = scaleBoundCheck(disk, {vec({0.75, 0}), 0.25}, 0.5);
  EXPECT_TRUE(a.holds);
  EXPECT_THROW(scaleBoundCheck(disk, {vec({0.9, 0}), 0.2}, 0.1), PreconditionViolation);
  // [0.5,1]x[-0.25,0.25] meets the interior of 0.75 * square, so eps = 0.25 is inadmissible.
  EXPECT_THROW(scaleBoundCheck(gen::square(), {vec({0.75, 0}), 0.25}, 0.25), PreconditionViolation);
  auto s = scaleBoundCheck(gen::square(), {vec({0.75, 0}), 0.25}, 0.5);
  EXPECT_TRUE(s.holds);
}

TEST(ScaleBound, NoPlacementFitsThinAnnulus) {
  // A scale-0.2 disk needs width 0.4 but the annulus is only 0.1 wide.
  auto disk = gen::ball(2);
  for (int i = 0; i <= 200; ++i) {
    Vec c = vec({i / 200.0, 0});
    bool inside = c.norm() + 0.2 <= 1.0 + kTau;
    bool avoids = c.norm() - 0.2 >= 0.9 - kTau;
    EXPECT_FALSE(inside && avoids);
  }
}

TEST(Contact, Examples) {
  auto disk = gen::ball(2);
  auto a = homothetBoundaryContact(disk, kUnit2, {vec({0.5, 0}), 0.5});
  EXPECT_EQ(a.kind, Contact::Kind::SinglePoint);
  ASSERT_EQ(a.points.size(), 1u);
  expectVec(a.points[0], vec({1, 0}), 1e-9);
  auto sq = gen::square();
  auto b = homothetBoundaryContact(sq, kUnit2, {vec({0.5, 0}), 0.5});
  EXPECT_EQ(b.kind, Contact::Kind::SupportingSegments);
  ASSERT_EQ(b.segments.size(), 1u);
  EXPECT_NEAR(b.segments[0].x(0), 1.0, 1e-9);
  EXPECT_NEAR(b.segments[0].length(), 1.0, 1e-9);
  auto c = homothetBoundaryContact(disk, kUnit2, {vec({0.2, 0}), 0.5});
  EXPECT_EQ(c.kind, Contact::Kind::Empty);
  EXPECT_THROW(homothetBoundaryContact(disk, kUnit2, {vec({0.8, 0}), 0.5}), PreconditionViolation);
}

TEST(Homothet, Compose) {
  Homothet a{vec({1, 2}), 3.0}, b{vec({-1, 0.5}), 0.25};
  auto c = a.compose(b);
  expectVec(c.center, vec({1 - 3, 2 + 1.5}), 0);
  EXPECT_EQ(c.scale, 0.75);
  auto r = a.relative(c);
  expectVec(r.center, b.center, 1e-15);
  EXPECT_DOUBLE_EQ(r.scale, b.scale);
}

TEST(Construction, Errors) {
  EXPECT_THROW(ConvexBody::polytope({vec({1, 1}), vec({2, 1}), vec({1, 2})}), InvalidArgument);
  std::vector<Vec> few = {vec({1, 0}), vec({0, 1}), vec({-1, 0}), vec({0, -1})};
  EXPECT_THROW(ConvexBody::smooth2d(few), InvalidArgument);
  auto big = ConvexBody::polytope({vec({10, 10}), vec({-10, 10}), vec({-10, -10}), vec({10, -10})});
  EXPECT_TRUE(big.rescaled());
  EXPECT_NEAR(big.diameter(), 2.0, 1e-9);
}

TEST(Construction, FacetsMatchVertices) {
  auto P = gen::randomPolytope(9, 3, 14);
  for (const auto& v : P.vertices()) EXPECT_LE(gauge(P, v), 1.0 + 1e-9);
  for (size_t i = 0; i < P.facets().size(); ++i)
    for (int id : P.facetVertices()[i])
      EXPECT_NEAR(P.facets()[i].normal.dot(P.vertices()[id]), P.facets()[i].offset, 1e-9);
}

TEST(Generators, NonCoplanarHull) {
  auto nc = gen::nonCoplanarHull(6);
  ASSERT_EQ(nc.segments.size(), 6u);
  for (size_t i = 0; i < 6; ++i)
    for (size_t j = i + 1; j < 6; ++j) EXPECT_GT(std::abs(gen::coplanarityDet(nc.segments[i], nc.segments[j])), 1e-6);
  Homothet unit{Vec::Zero(3), 1.0};
  for (const auto& s : nc.segments)
    for (double t : {0.0, 0.3, 0.7, 1.0})
      EXPECT_NEAR(signedDistance(nc.body, unit, s.x + t * (s.y - s.x)), 0.0, 1e-9);
}

TEST(Generators, CircleAndSquare) {
  auto c = gen::circle(200);
  EXPECT_EQ(c.points.size(), 200u);
  EXPECT_NEAR(c.eps, 1.5 * 2 * M_PI / 200, 1e-15);
  auto sq = gen::regularPolygon(4);
  EXPECT_EQ(sq.vertices().size(), 4u);
  EXPECT_NEAR(support(sq, vec({1, 0})).value, 1.0, 1e-12);
  EXPECT_NEAR(support(sq, vec({1, 1})).value, 2.0, 1e-12);
}
