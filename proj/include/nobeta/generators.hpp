#pragma once

#include "nobeta/body.hpp"
#include "nobeta/target.hpp"

#include <cstdint>

namespace nobeta::gen {

ConvexBody ball(int dim);
ConvexBody regularPolygon(int n);  // inradius 1; n = 4 gives [-1,1]^2
ConvexBody square();
ConvexBody cube();
ConvexBody tetrahedron();
ConvexBody triangularPrism();
ConvexBody randomPolytope(std::uint64_t seed, int dim, int points);
ConvexBody ellipse(double a, double b, int samples = 256);

struct NonCoplanar {
  ConvexBody body;
  std::vector<Segment> segments;
};
// Convex hull of m pairwise non-coplanar segments, each on the boundary.
NonCoplanar nonCoplanarHull(int m);
double coplanarityDet(const Segment& s, const Segment& t);

TargetSet circle(int n, double radius = 1.0);
TargetSet segment(int n, const Vec& a, const Vec& b);
TargetSet cantorDust(int depth);
TargetSet scatter(int n, std::uint64_t seed, double eps = 0.02, int dim = 2);
// Geometric sequence base + dir * r^k (k < n) plus its limit, eps given.
TargetSet convergentSequence(int n, const Vec& base, const Vec& dir, double ratio, double eps);
// Circle samples plus a resolved convergent decoration outside the circle.
TargetSet decoratedCircle(int n);

}  // namespace nobeta::gen
