#pragma once

#include "nobeta/common.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace nobeta {

enum class BodyKind { Ball, Polytope, Smooth2d };

std::string kindName(BodyKind k);

struct Facet {
  Vec normal;     // unit outward normal
  double offset;  // > 0 since the origin is interior
};

struct Homothet {
  Vec center;
  double scale = 0.0;

  Vec apply(const Vec& p) const { return center + scale * p; }
  // (w1 + t1 (w2 + t2 P)) = (w1 + t1 w2) + t1 t2 P
  Homothet compose(const Homothet& inner) const {
    return {center + scale * inner.center, scale * inner.scale};
  }
  // Coordinates of q relative to this copy, so that this->compose(result) == q.
  Homothet relative(const Homothet& q) const {
    return {(q.center - center) / scale, q.scale / scale};
  }
};

struct Segment {
  Vec x;
  Vec y;
  bool degenerate() const { return (y - x).norm() <= kTau; }
  double length() const { return (y - x).norm(); }
};

struct HyperplaneAt {
  Vec base;
  Vec normal;  // body lies where normal.(z - base) <= 0
};

class ConvexBody {
 public:
  static ConvexBody ball(int dim, std::string name = "ball");
  // Vertices are hulled; non-extreme points are dropped. The origin must be
  // strictly interior. Diameter outside [1, 4] is rescaled to 2.
  static ConvexBody polytope(const std::vector<Vec>& points, std::string name = "polytope");
  // At least 256 samples of a closed convex curve, treated as the polygon
  // through them.
  static ConvexBody smooth2d(const std::vector<Vec>& samples, std::string name = "smooth2d");

  BodyKind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  bool isBall() const { return kind_ == BodyKind::Ball; }
  bool hasFacets() const { return kind_ != BodyKind::Ball; }
  // Polytope: extreme points (2D in counterclockwise order). Smooth2d: the samples.
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Vec>& samples() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  // Vertex ids lying on each facet.
  const std::vector<std::vector<int>>& facetVertices() const { return facetVertices_; }
  double diameter() const { return diameter_; }
  double rescaleFactor() const { return rescale_; }
  bool rescaled() const { return rescale_ != 1.0; }

  // Difference body P + (-P) in 2D, counterclockwise, with the vertex pairs
  // (i, j) such that vertex = v_i - v_j.
  const std::vector<Vec>& diffVertices() const { return diffVertices_; }
  const std::vector<std::pair<int, int>>& diffPairs() const { return diffPairs_; }
  const std::vector<Facet>& diffFacets() const { return diffFacets_; }

 private:
  void finishPolygon();
  BodyKind kind_ = BodyKind::Ball;
  int dim_ = 0;
  std::string name_;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
  std::vector<std::vector<int>> facetVertices_;
  double diameter_ = 2.0;
  double rescale_ = 1.0;
  std::vector<Vec> diffVertices_;
  std::vector<std::pair<int, int>> diffPairs_;
  std::vector<Facet> diffFacets_;
};

using BodyPtr = std::shared_ptr<const ConvexBody>;

// Convex hull helpers.
std::vector<int> hull2d(const std::vector<Vec>& pts);  // counterclockwise, no collinear points
struct Hull3 {
  std::vector<Facet> facets;
  std::vector<std::vector<int>> facetVertices;
  std::vector<int> extreme;
};
Hull3 hull3d(const std::vector<Vec>& pts, double tol = 1e-9);

struct SupportResult {
  double value;
  Vec witness;
};
SupportResult support(const ConvexBody& P, const Vec& u);

// Minkowski functional of P: least t >= 0 with z in tP.
double gauge(const ConvexBody& P, const Vec& z);
bool containsPoint(const ConvexBody& P, const Homothet& q, const Vec& p, double tol = kTau);
double signedDistance(const ConvexBody& P, const Homothet& q, const Vec& p);
// Radial projection of p onto the boundary of q (from q's center).
Vec radialProject(const ConvexBody& P, const Homothet& q, const Vec& p);

double inradius(const ConvexBody& P);

// Largest lambda >= 0 with x + lambda u in P, for unit-free u.
double chordFrom(const ConvexBody& P, const Vec& x, const Vec& u);

struct ChordResult {
  double length;
  Segment chord;
};
ChordResult maxChord(const ConvexBody& P, const Vec& u);
ChordResult maxChordLp(const ConvexBody& P, const Vec& u);  // always the LP route
bool isMaximalSegment(const ConvexBody& P, const Segment& seg);

Homothet minEnclosingHomothet(const ConvexBody& P, const std::vector<Vec>& points);
Homothet minEnclosingBall(const std::vector<Vec>& points);  // Welzl

std::vector<HyperplaneAt> supportingHyperplanesAt(const ConvexBody& P, const Vec& x);

struct Containment {
  bool ok;
  std::optional<Vec> witness;  // point of inner outside outer
  int facet = -1;
};
Containment homothetContains(const ConvexBody& P, const Homothet& outer, const Homothet& inner,
                             double tol = kTau);

// Smallest lambda with (w1 + lambda t1 P) meeting (w2 + lambda t2 P); the copies
// are disjoint iff lambda > 1 + tau. witness is a common point at lambda.
struct Separation {
  double lambda;
  Vec witness;
  bool disjoint() const { return lambda > 1.0 + kTau; }
};
Separation separation(const ConvexBody& P, const Homothet& a, const Homothet& b);

// Min of the gauge over a copy q (distance of q from the origin in P's norm).
struct GaugeMin {
  double value;
  Vec point;
};
GaugeMin minGaugeOver(const ConvexBody& P, const Homothet& q);

}  // namespace nobeta
