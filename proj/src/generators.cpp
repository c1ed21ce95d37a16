#include "nobeta/generators.hpp"

#include "nobeta/rng.hpp"

#include <cmath>
#include <numbers>

namespace nobeta::gen {

namespace {
constexpr double kPi = std::numbers::pi;
}

ConvexBody ball(int dim) { return ConvexBody::ball(dim, dim == 2 ? "disk" : "ball"); }

ConvexBody regularPolygon(int n) {
  if (n < 3) throw InvalidArgument("regular polygon needs n >= 3");
  double R = 1.0 / std::cos(kPi / n);
  std::vector<Vec> v;
  for (int k = 0; k < n; ++k) {
    double a = kPi / n + 2.0 * kPi * k / n;
    v.push_back(vec({R * std::cos(a), R * std::sin(a)}));
  }
  // Snap the square to exact corners.
  if (n == 4) v = {vec({1, 1}), vec({-1, 1}), vec({-1, -1}), vec({1, -1})};
  return ConvexBody::polytope(v, n == 4 ? "square" : "regular-" + std::to_string(n) + "-gon");
}

ConvexBody square() { return regularPolygon(4); }

ConvexBody cube() {
  std::vector<Vec> v;
  for (int m = 0; m < 8; ++m)
    v.push_back(vec({(m & 1) ? 1.0 : -1.0, (m & 2) ? 1.0 : -1.0, (m & 4) ? 1.0 : -1.0}));
  return ConvexBody::polytope(v, "cube");
}

ConvexBody tetrahedron() {
  return ConvexBody::polytope({vec({1, 1, 1}), vec({1, -1, -1}), vec({-1, 1, -1}), vec({-1, -1, 1})},
                              "tetrahedron");
}

ConvexBody triangularPrism() {
  std::vector<Vec> v;
  for (double z : {-0.8, 0.8})
    for (int k = 0; k < 3; ++k) {
      double a = kPi / 2 + 2.0 * kPi * k / 3;
      v.push_back(vec({std::cos(a), std::sin(a), z}));
    }
  return ConvexBody::polytope(v, "triangular-prism");
}

ConvexBody randomPolytope(std::uint64_t seed, int dim, int points) {
  if (dim < 2 || dim > 3) throw InvalidArgument("random polytope dimension must be 2 or 3");
  if (points < dim + 1) throw InvalidArgument("random polytope needs at least d+1 points");
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    CounterRng rng(seed, attempt);
    std::vector<Vec> v;
    for (int i = 0; i < points; ++i) {
      Vec p(dim);
      for (int j = 0; j < dim; ++j) p(j) = rng.normal();
      if (p.norm() < 1e-12) continue;
      v.push_back(p.normalized() * rng.uniform(0.8, 1.0));
    }
    try {
      return ConvexBody::polytope(v, "random-polytope-" + std::to_string(seed));
    } catch (const InvalidArgument&) {
      // origin outside the sampled hull; redraw
    }
  }
  throw InvalidArgument("random polytope: no sample contained the origin");
}

ConvexBody ellipse(double a, double b, int samples) {
  if (!(a > 0 && b > 0)) throw InvalidArgument("ellipse axes must be positive");
  std::vector<Vec> s;
  for (int k = 0; k < samples; ++k) {
    double t = 2.0 * kPi * k / samples;
    s.push_back(vec({a * std::cos(t), b * std::sin(t)}));
  }
  return ConvexBody::smooth2d(s, "ellipse");
}

double coplanarityDet(const Segment& s, const Segment& t) {
  Eigen::Matrix4d M;
  const Vec* p[4] = {&s.x, &s.y, &t.x, &t.y};
  for (int r = 0; r < 4; ++r) {
    M.block<1, 3>(r, 0) = p[r]->transpose();
    M(r, 3) = 1.0;
  }
  return M.determinant();
}

NonCoplanar nonCoplanarHull(int m) {
  if (m < 2 || m > 16) throw InvalidArgument("nonCoplanarHull needs 2 <= m <= 16");
  const double h = 1.5, rBase = 1.0, rTop = 0.5;
  std::vector<Segment> segs;
  for (int i = 0; i < m; ++i) {
    double jitter = 0.3 * (2.0 * kPi / m) * (static_cast<double>((i * 7919) % 13) / 13.0 - 0.5);
    double phi = 2.0 * kPi * i / m + jitter;
    double twist = 0.06 + 0.02 * i / m;
    segs.push_back({vec({rBase * std::cos(phi), rBase * std::sin(phi), -h / 2}),
                    vec({rTop * std::cos(phi + twist), rTop * std::sin(phi + twist), h / 2})});
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (std::abs(coplanarityDet(segs[i], segs[j])) <= 1e-9)
        throw InvalidArgument("nonCoplanarHull: segments " + std::to_string(i) + " and " + std::to_string(j) +
                              " are coplanar");
  // Each segment needs a plane containing it with every other endpoint strictly on one side.
  for (int i = 0; i < m; ++i) {
    Vec d = (segs[i].y - segs[i].x).normalized();
    Vec e1 = d.unitOrthogonal();
    Vec e2 = Eigen::Vector3d(d).cross(Eigen::Vector3d(e1));
    double best = -1.0;
    for (int k = 0; k < 3600 && best <= 1e-9; ++k) {
      double th = 2.0 * kPi * k / 3600;
      Vec n = std::cos(th) * e1 + std::sin(th) * e2;
      double margin = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        margin = std::min({margin, n.dot(segs[i].x - segs[j].x), n.dot(segs[i].x - segs[j].y)});
      }
      best = std::max(best, margin);
    }
    if (best <= 1e-9)
      throw InvalidArgument("nonCoplanarHull: segment " + std::to_string(i) + " has no separating supporting plane");
  }
  std::vector<Vec> pts;
  for (const auto& s : segs) {
    pts.push_back(s.x);
    pts.push_back(s.y);
  }
  return {ConvexBody::polytope(pts, "noncoplanar-hull-" + std::to_string(m)), segs};
}

TargetSet circle(int n, double radius) {
  if (n < 1) throw InvalidArgument("circle needs n >= 1");
  TargetSet t;
  t.generator = "circle-" + std::to_string(n);
  for (int k = 0; k < n; ++k) {
    double a = 2.0 * kPi * k / n;
    t.points.push_back(vec({radius * std::cos(a), radius * std::sin(a)}));
  }
  t.eps = 1.5 * 2.0 * kPi * radius / n;
  return t;
}

TargetSet segment(int n, const Vec& a, const Vec& b) {
  if (n < 2) throw InvalidArgument("segment needs n >= 2");
  TargetSet t;
  t.dim = static_cast<int>(a.size());
  t.generator = "segment-" + std::to_string(n);
  for (int k = 0; k < n; ++k) t.points.push_back(a + (b - a) * (static_cast<double>(k) / (n - 1)));
  t.eps = 1.5 * (b - a).norm() / (n - 1);
  return t;
}

TargetSet cantorDust(int depth) {
  if (depth < 1 || depth > 6) throw InvalidArgument("cantor dust depth must be in [1, 6]");
  std::vector<double> c = {0.5};
  double len = 1.0;
  for (int k = 0; k < depth; ++k) {
    std::vector<double> next;
    for (double x : c) {
      next.push_back(x - len / 3.0);
      next.push_back(x + len / 3.0);
    }
    c = next;
    len /= 3.0;
  }
  TargetSet t;
  t.generator = "cantor-dust-depth" + std::to_string(depth);
  for (double x : c)
    for (double y : c) t.points.push_back(vec({2.0 * x - 1.0, 2.0 * y - 1.0}));
  t.eps = 1.5 * 2.0 * 2.0 * len;  // sibling centers are 2 * len apart in [0,1]
  return t;
}

TargetSet scatter(int n, std::uint64_t seed, double eps, int dim) {
  if (n < 0) throw InvalidArgument("scatter needs n >= 0");
  CounterRng rng(seed, 1);
  TargetSet t;
  t.dim = dim;
  t.eps = eps;
  t.generator = "finite-scatter";
  int tries = 0;
  while (static_cast<int>(t.points.size()) < n) {
    if (++tries > 100000) throw InvalidArgument("scatter: cannot place points that far apart");
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p(j) = rng.uniform(-1.0, 1.0);
    bool ok = true;
    for (const auto& q : t.points) ok = ok && (p - q).norm() > 10.0 * eps;
    if (ok) t.points.push_back(p);
  }
  return t;
}

TargetSet convergentSequence(int n, const Vec& base, const Vec& dir, double ratio, double eps) {
  if (!(ratio > 0 && ratio < 1)) throw InvalidArgument("ratio must be in (0, 1)");
  TargetSet t;
  t.dim = static_cast<int>(base.size());
  t.eps = eps;
  t.generator = "convergent-sequence";
  double r = 1.0;
  for (int k = 0; k < n; ++k, r *= ratio) t.points.push_back(base + r * dir);
  t.points.push_back(base);
  return t;
}

TargetSet decoratedCircle(int n) {
  TargetSet t = circle(n);
  // Points on the radius-1.3 arc at angles c * r^k, stopped before
  // consecutive gaps drop under 2.5 eps so the decoration stays resolved.
  const double R = 1.3, c = 1.0, r = 0.6;
  double a = c;
  t.points.push_back(vec({R, 0.0}));
  while (R * a * (1.0 - r) >= 2.5 * t.eps) {
    t.points.push_back(vec({R * std::cos(a), R * std::sin(a)}));
    a *= r;
  }
  t.points.push_back(vec({R * std::cos(a), R * std::sin(a)}));
  t.generator = "decorated-circle-" + std::to_string(n);
  return t;
}

}  // namespace nobeta::gen
