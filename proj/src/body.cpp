#include "nobeta/body.hpp"

#include "nobeta/lp.hpp"
#include "nobeta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nobeta {

std::string kindName(BodyKind k) {
  switch (k) {
    case BodyKind::Ball: return "ball";
    case BodyKind::Polytope: return "polytope";
    case BodyKind::Smooth2d: return "smooth2d";
  }
  return "?";
}

namespace {

double cross2(const Vec& a, const Vec& b) { return a(0) * b(1) - a(1) * b(0); }

std::string fmtVec(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

void checkDims(const std::vector<Vec>& pts) {
  if (pts.empty()) throw InvalidArgument("body needs at least one point");
  auto d = pts[0].size();
  for (const auto& p : pts) {
    if (p.size() != d) throw InvalidArgument("points have mixed dimensions");
    if (!p.allFinite()) throw InvalidArgument("non-finite coordinate");
  }
}

double maxPairDistance(const std::vector<Vec>& pts) {
  double best = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

Vec centroid(const std::vector<Vec>& pts) {
  Vec c = Vec::Zero(pts[0].size());
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

}  // namespace

std::vector<int> hull2d(const std::vector<Vec>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (pts[a](0) != pts[b](0)) return pts[a](0) < pts[b](0);
    return pts[a](1) < pts[b](1);
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](int a, int b) { return (pts[a] - pts[b]).norm() <= 1e-12; }),
            idx.end());
  if (idx.size() < 3) return idx;
  auto turn = [&](int o, int a, int b) { return cross2(pts[a] - pts[o], pts[b] - pts[o]); };
  std::vector<int> h(2 * idx.size());
  int k = 0;
  for (int i : idx) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], i) <= 1e-12) --k;
    h[k++] = i;
  }
  for (int t = static_cast<int>(idx.size()) - 2, lo = k + 1; t >= 0; --t) {
    int i = idx[t];
    while (k >= lo && turn(h[k - 2], h[k - 1], i) <= 1e-12) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

Hull3 hull3d(const std::vector<Vec>& pts, double tol) {
  Hull3 out;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Eigen::Vector3d a = pts[i].head<3>(), b = pts[j].head<3>(), c = pts[k].head<3>();
        Eigen::Vector3d nrm = (b - a).cross(c - a);
        double len = nrm.norm();
        if (len < 1e-10) continue;
        nrm /= len;
        double off = nrm.dot(a);
        int above = 0, below = 0;
        for (int m = 0; m < n; ++m) {
          double s = nrm.dot(pts[m].head<3>()) - off;
          if (s > tol) ++above;
          if (s < -tol) ++below;
          if (above && below) break;
        }
        if (above && below) continue;
        if (above) {
          nrm = -nrm;
          off = -off;
        }
        bool dup = false;
        for (const auto& f : out.facets) {
          if ((f.normal - Vec(nrm)).norm() < 1e-7 && std::abs(f.offset - off) < 1e-7) {
            dup = true;
            break;
          }
        }
        if (dup) continue;
        out.facets.push_back({Vec(nrm), off});
      }
    }
  }
  std::vector<int> count(n, 0);
  for (const auto& f : out.facets) {
    std::vector<int> on;
    for (int m = 0; m < n; ++m) {
      if (std::abs(f.normal.dot(pts[m]) - f.offset) <= 1e-7) on.push_back(m);
    }
    out.facetVertices.push_back(on);
  }
  // A point is extreme iff the facets through it have normals spanning R^3.
  for (int m = 0; m < n; ++m) {
    Mat N(0, 3);
    for (size_t f = 0; f < out.facets.size(); ++f) {
      const auto& on = out.facetVertices[f];
      if (std::find(on.begin(), on.end(), m) != on.end()) {
        N.conservativeResize(N.rows() + 1, 3);
        N.row(N.rows() - 1) = out.facets[f].normal.transpose();
      }
    }
    if (N.rows() >= 3) {
      Eigen::FullPivLU<Mat> lu(N);
      lu.setThreshold(1e-9);
      if (lu.rank() == 3) out.extreme.push_back(m);
    }
  }
  return out;
}

ConvexBody ConvexBody::ball(int dim, std::string name) {
  if (dim < 1) throw InvalidArgument("ball dimension must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::Ball;
  b.dim_ = dim;
  b.name_ = std::move(name);
  b.diameter_ = 2.0;
  return b;
}

void ConvexBody::finishPolygon() {
  const int n = static_cast<int>(vertices_.size());
  facets_.clear();
  facetVertices_.clear();
  for (int i = 0; i < n; ++i) {
    const Vec& a = vertices_[i];
    const Vec& b = vertices_[(i + 1) % n];
    Vec e = b - a;
    Vec nrm(2);
    nrm << e(1), -e(0);
    nrm.normalize();
    facets_.push_back({nrm, nrm.dot(a)});
    facetVertices_.push_back({i, (i + 1) % n});
  }
  // Difference body by merging edge sequences of P and -P.
  auto bottom = [](const std::vector<Vec>& poly) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(poly.size()); ++i) {
      if (poly[i](1) < poly[best](1) ||
          (poly[i](1) == poly[best](1) && poly[i](0) < poly[best](0)))
        best = i;
    }
    return best;
  };
  std::vector<Vec> neg(n);
  for (int i = 0; i < n; ++i) neg[i] = -vertices_[i];
  int ia = bottom(vertices_), ib = bottom(neg);
  diffVertices_.clear();
  diffPairs_.clear();
  int i = 0, j = 0;
  while (i < n || j < n) {
    int a = (ia + i) % n, b = (ib + j) % n;
    diffVertices_.push_back(vertices_[a] + neg[b]);
    diffPairs_.push_back({a, b});
    Vec ea = vertices_[(a + 1) % n] - vertices_[a];
    Vec eb = neg[(b + 1) % n] - neg[b];
    double c = cross2(ea, eb);
    if (i >= n) {
      ++j;
    } else if (j >= n) {
      ++i;
    } else if (c > 1e-14) {
      ++i;
    } else if (c < -1e-14) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  diffFacets_.clear();
  const int m = static_cast<int>(diffVertices_.size());
  for (int k = 0; k < m; ++k) {
    Vec e = diffVertices_[(k + 1) % m] - diffVertices_[k];
    Vec nrm(2);
    nrm << e(1), -e(0);
    double len = nrm.norm();
    if (len > 0) nrm /= len;
    diffFacets_.push_back({nrm, nrm.dot(diffVertices_[k])});
  }
}

ConvexBody ConvexBody::polytope(const std::vector<Vec>& points, std::string name) {
  checkDims(points);
  const int d = static_cast<int>(points[0].size());
  if (d != 2 && d != 3) throw InvalidArgument("polytopes are supported in dimension 2 and 3");
  ConvexBody b;
  b.kind_ = BodyKind::Polytope;
  b.dim_ = d;
  b.name_ = std::move(name);
  if (d == 2) {
    auto h = hull2d(points);
    if (h.size() < 3) throw InvalidArgument("polytope has empty interior");
    for (int i : h) b.vertices_.push_back(points[i]);
  } else {
    Hull3 h = hull3d(points);
    if (h.extreme.size() < 4 || h.facets.size() < 4)
      throw InvalidArgument("polytope has empty interior");
    for (int i : h.extreme) b.vertices_.push_back(points[i]);
  }
  double diam = maxPairDistance(b.vertices_);
  if (diam < 1.0 || diam > 4.0) {
    b.rescale_ = 2.0 / diam;
    for (auto& v : b.vertices_) v *= b.rescale_;
  }
  b.diameter_ = maxPairDistance(b.vertices_);
  if (d == 2) {
    b.finishPolygon();
  } else {
    Hull3 h = hull3d(b.vertices_);
    b.facets_ = h.facets;
    b.facetVertices_ = h.facetVertices;
  }
  for (const auto& f : b.facets_) {
    if (f.offset <= kTau) {
      Vec c = centroid(b.vertices_);
      throw InvalidArgument("origin is not interior to " + b.name_ + "; translate by " +
                            fmtVec(-c / b.rescale_) + " (minus the vertex centroid)");
    }
  }
  for (const auto& v : b.vertices_) {
    for (const auto& f : b.facets_) {
      if (f.normal.dot(v) > f.offset + 1e-7)
        throw InvalidArgument("vertex and half-space representations disagree");
    }
  }
  for (const auto& on : b.facetVertices_) {
    if (static_cast<int>(on.size()) < d)
      throw InvalidArgument("facet with too few vertices");
  }
  return b;
}

ConvexBody ConvexBody::smooth2d(const std::vector<Vec>& samples, std::string name) {
  checkDims(samples);
  if (samples[0].size() != 2) throw InvalidArgument("smooth2d bodies are planar");
  if (samples.size() < 256) throw InvalidArgument("smooth2d needs at least 256 boundary samples");
  auto h = hull2d(samples);
  if (h.size() != samples.size())
    throw InvalidArgument("smooth2d samples must be in strictly convex position");
  ConvexBody b;
  b.kind_ = BodyKind::Smooth2d;
  b.dim_ = 2;
  b.name_ = std::move(name);
  for (int i : h) b.vertices_.push_back(samples[i]);
  double diam = maxPairDistance(b.vertices_);
  if (diam < 1.0 || diam > 4.0) {
    b.rescale_ = 2.0 / diam;
    for (auto& v : b.vertices_) v *= b.rescale_;
  }
  b.diameter_ = maxPairDistance(b.vertices_);
  b.finishPolygon();
  for (const auto& f : b.facets_) {
    if (f.offset <= kTau) {
      Vec c = centroid(b.vertices_);
      throw InvalidArgument("origin is not interior to " + b.name_ + "; translate by " +
                            fmtVec(-c / b.rescale_) + " (minus the sample centroid)");
    }
  }
  return b;
}

SupportResult support(const ConvexBody& P, const Vec& u) {
  if (u.size() != P.dim()) throw InvalidArgument("direction has wrong dimension");
  double n = u.norm();
  if (n == 0.0) throw InvalidArgument("support direction must be nonzero");
  if (P.isBall()) return {n, u / n};
  int best = 0;
  double val = -std::numeric_limits<double>::infinity();
  const auto& V = P.vertices();
  for (int i = 0; i < static_cast<int>(V.size()); ++i) {
    double s = V[i].dot(u);
    if (s > val) {
      val = s;
      best = i;
    }
  }
  return {val, V[best]};
}

double gauge(const ConvexBody& P, const Vec& z) {
  if (P.isBall()) return z.norm();
  double g = 0.0;
  for (const auto& f : P.facets()) g = std::max(g, f.normal.dot(z) / f.offset);
  return g;
}

double signedDistance(const ConvexBody& P, const Homothet& q, const Vec& p) {
  if (q.scale <= 0.0) return (p - q.center).norm();
  if (P.isBall()) return (p - q.center).norm() - q.scale;
  double gap = -std::numeric_limits<double>::infinity();
  for (const auto& f : P.facets()) gap = std::max(gap, f.normal.dot(p - q.center) - q.scale * f.offset);
  if (P.kind() == BodyKind::Polytope || gap <= 0.0) return gap;
  // smooth2d outside: Euclidean distance to the boundary loop.
  const auto& V = P.vertices();
  const int n = static_cast<int>(V.size());
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Vec a = q.apply(V[i]), b = q.apply(V[(i + 1) % n]);
    Vec e = b - a;
    double s = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (a + s * e - p).norm());
  }
  return best;
}

bool containsPoint(const ConvexBody& P, const Homothet& q, const Vec& p, double tol) {
  return signedDistance(P, q, p) <= tol;
}

Vec radialProject(const ConvexBody& P, const Homothet& q, const Vec& p) {
  Vec z = p - q.center;
  double g = gauge(P, z);
  if (g <= 0.0) {
    Vec e = Vec::Zero(P.dim());
    e(0) = 1.0;
    return q.center + q.scale * e / gauge(P, e);
  }
  return q.center + z * (q.scale / g);
}

double inradius(const ConvexBody& P) {
  if (P.isBall()) return 1.0;
  const int d = P.dim();
  const auto& F = P.facets();
  Mat A(F.size(), d + 1);
  Vec b(F.size());
  for (size_t i = 0; i < F.size(); ++i) {
    A.row(i).head(d) = F[i].normal.transpose();
    A(i, d) = 1.0;
    b(i) = F[i].offset;
  }
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  auto r = lp::maximize(A, b, c);
  return r.optimal() ? r.value : 0.0;
}

double chordFrom(const ConvexBody& P, const Vec& x, const Vec& u) {
  if (P.isBall()) {
    double uu = u.squaredNorm();
    double xu = x.dot(u);
    double disc = xu * xu - uu * (x.squaredNorm() - 1.0);
    if (disc < 0.0) return 0.0;
    return std::max(0.0, (-xu + std::sqrt(disc)) / uu);
  }
  double lam = std::numeric_limits<double>::infinity();
  for (const auto& f : P.facets()) {
    double au = f.normal.dot(u);
    if (au > 1e-15) lam = std::min(lam, (f.offset - f.normal.dot(x)) / au);
  }
  return std::max(0.0, lam);
}

ChordResult maxChordLp(const ConvexBody& P, const Vec& u) {
  double n = u.norm();
  if (n == 0.0) throw InvalidArgument("chord direction must be nonzero");
  Vec uh = u / n;
  if (P.isBall()) return {2.0, {-uh, uh}};
  const int d = P.dim();
  const auto& F = P.facets();
  const int m = static_cast<int>(F.size());
  Mat A = Mat::Zero(2 * m, d + 1);
  Vec b(2 * m);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(d) = F[i].normal.transpose();
    b(i) = F[i].offset;
    A.row(m + i).head(d) = F[i].normal.transpose();
    A(m + i, d) = F[i].normal.dot(uh);
    b(m + i) = F[i].offset;
  }
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  auto r = lp::maximize(A, b, c);
  if (!r.optimal()) throw std::runtime_error("maxChord LP failed");
  Vec w = r.x.head(d);
  double lam = r.x(d);
  return {lam, {w, w + lam * uh}};
}

ChordResult maxChord(const ConvexBody& P, const Vec& u) {
  if (u.size() != P.dim()) throw InvalidArgument("direction has wrong dimension");
  double n = u.norm();
  if (n == 0.0) throw InvalidArgument("chord direction must be nonzero");
  Vec uh = u / n;
  if (P.isBall()) return {2.0, {-uh, uh}};
  if (P.dim() != 2) return maxChordLp(P, u);
  // Radial function of the difference body in direction uh.
  const auto& DF = P.diffFacets();
  int best = 0;
  double g = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(DF.size()); ++i) {
    double s = DF[i].normal.dot(uh) / DF[i].offset;
    if (s > g) {
      g = s;
      best = i;
    }
  }
  double lam = 1.0 / g;
  const auto& DV = P.diffVertices();
  const auto& DP = P.diffPairs();
  const int m = static_cast<int>(DV.size());
  Vec a = DV[best], bnext = DV[(best + 1) % m];
  Vec e = bnext - a;
  Vec target = lam * uh;
  double s = e.squaredNorm() > 0 ? std::clamp((target - a).dot(e) / e.squaredNorm(), 0.0, 1.0) : 0.0;
  const auto& V = P.vertices();
  auto [pa, qa] = DP[best];
  auto [pb, qb] = DP[(best + 1) % m];
  Vec p = (1 - s) * V[pa] + s * V[pb];
  Vec q = (1 - s) * V[qa] + s * V[qb];
  return {lam, {q, p}};
}

bool isMaximalSegment(const ConvexBody& P, const Segment& seg) {
  Homothet unit{Vec::Zero(P.dim()), 1.0};
  if (seg.degenerate()) throw PreconditionViolation("degenerate segment");
  for (const Vec* e : {&seg.x, &seg.y}) {
    if (!containsPoint(P, unit, *e, kTau))
      throw PreconditionViolation("segment endpoint outside the body", *e);
  }
  return seg.length() >= maxChord(P, seg.y - seg.x).length - kTau;
}

namespace {

struct BallFit {
  Vec c;
  double r2 = -1.0;
};

BallFit ballFromBoundary(const std::vector<Vec>& R) {
  BallFit b;
  if (R.empty()) return b;
  const Vec& p0 = R[0];
  if (R.size() == 1) {
    b.c = p0;
    b.r2 = 0.0;
    return b;
  }
  const int m = static_cast<int>(R.size()) - 1;
  Mat Q(p0.size(), m);
  for (int k = 0; k < m; ++k) Q.col(k) = R[k + 1] - p0;
  Mat G = Q.transpose() * Q;
  Vec rhs = 0.5 * G.diagonal();
  Vec lam = G.colPivHouseholderQr().solve(rhs);
  b.c = p0 + Q * lam;
  b.r2 = (b.c - p0).squaredNorm();
  for (int k = 0; k < m; ++k) b.r2 = std::max(b.r2, (b.c - R[k + 1]).squaredNorm());
  return b;
}

bool inBall(const BallFit& b, const Vec& p) {
  if (b.r2 < 0) return false;
  double r = std::sqrt(b.r2);
  return (p - b.c).norm() <= r + 1e-12 * (1.0 + r);
}

BallFit mtf(std::vector<Vec>& pts, int n, std::vector<Vec>& R, int d) {
  BallFit b = ballFromBoundary(R);
  if (static_cast<int>(R.size()) == d + 1) return b;
  for (int i = 0; i < n; ++i) {
    if (!inBall(b, pts[i])) {
      R.push_back(pts[i]);
      b = mtf(pts, i, R, d);
      R.pop_back();
      std::rotate(pts.begin(), pts.begin() + i, pts.begin() + i + 1);
    }
  }
  return b;
}

}  // namespace

Homothet minEnclosingBall(const std::vector<Vec>& points) {
  if (points.empty()) throw InvalidArgument("minimal enclosing copy of an empty set");
  std::vector<Vec> pts = points;
  CounterRng rng(0x5eed);
  for (size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.below(i)]);
  std::vector<Vec> R;
  const int d = static_cast<int>(pts[0].size());
  BallFit b = mtf(pts, static_cast<int>(pts.size()), R, d);
  return {b.c, std::sqrt(std::max(0.0, b.r2))};
}

Homothet minEnclosingHomothet(const ConvexBody& P, const std::vector<Vec>& points) {
  if (points.empty()) throw InvalidArgument("minimal enclosing copy of an empty set");
  for (const auto& p : points)
    if (p.size() != P.dim()) throw InvalidArgument("point has wrong dimension");
  bool single = true;
  for (const auto& p : points) single = single && (p - points[0]).norm() <= kTau;
  if (single) return {points[0], 0.0};
  if (P.isBall()) return minEnclosingBall(points);
  const int d = P.dim();
  const auto& F = P.facets();
  const int rows = static_cast<int>(points.size() * F.size()) + 1;
  Mat A = Mat::Zero(rows, d + 1);
  Vec b(rows);
  int r = 0;
  for (const auto& p : points) {
    for (const auto& f : F) {
      A.row(r).head(d) = -f.normal.transpose();
      A(r, d) = -f.offset;
      b(r) = -f.normal.dot(p);
      ++r;
    }
  }
  A(r, d) = -1.0;
  b(r) = 0.0;
  Mat C = Mat::Zero(d + 1, d + 1);
  C(0, d) = 1.0;
  for (int k = 0; k < d; ++k) C(k + 1, k) = 1.0;
  auto res = lp::lexMinimize(A, b, C);
  if (!res.optimal()) throw std::runtime_error("minimal enclosing homothet LP failed");
  return {res.x.head(d), std::max(0.0, res.x(d))};
}

std::vector<HyperplaneAt> supportingHyperplanesAt(const ConvexBody& P, const Vec& x) {
  Homothet unit{Vec::Zero(P.dim()), 1.0};
  double sd = signedDistance(P, unit, x);
  if (std::abs(sd) > 1e-8) throw PreconditionViolation("point is not on the boundary", x);
  std::vector<HyperplaneAt> out;
  if (P.isBall()) {
    out.push_back({x, x / x.norm()});
    return out;
  }
  for (const auto& f : P.facets()) {
    if (std::abs(f.normal.dot(x) - f.offset) <= 1e-8) out.push_back({x, f.normal});
  }
  return out;
}

Containment homothetContains(const ConvexBody& P, const Homothet& outer, const Homothet& inner,
                             double tol) {
  if (P.isBall()) {
    Vec dlt = inner.center - outer.center;
    double dist = dlt.norm();
    if (dist + inner.scale <= outer.scale + tol) return {true, std::nullopt};
    Vec dir = dist > 0 ? Vec(dlt / dist) : Vec(Vec::Unit(P.dim(), 0));
    return {false, Vec(inner.center + inner.scale * dir)};
  }
  const auto& F = P.facets();
  int worst = -1;
  double excess = tol;
  for (int i = 0; i < static_cast<int>(F.size()); ++i) {
    double hin = F[i].normal.dot(inner.center) + inner.scale * F[i].offset;
    double hout = F[i].normal.dot(outer.center) + outer.scale * F[i].offset;
    if (hin - hout > excess) {
      excess = hin - hout;
      worst = i;
    }
  }
  if (worst < 0) return {true, std::nullopt};
  const Vec& v = P.vertices()[P.facetVertices()[worst][0]];
  return {false, Vec(inner.apply(v)), worst};
}

Separation separation(const ConvexBody& P, const Homothet& a, const Homothet& b) {
  double ts = a.scale + b.scale;
  if (P.isBall()) {
    double dist = (a.center - b.center).norm();
    if (ts <= 0.0) {
      return {dist > 0 ? std::numeric_limits<double>::infinity() : 0.0, a.center};
    }
    return {dist / ts, Vec(a.center + (b.center - a.center) * (a.scale / ts))};
  }
  const int d = P.dim();
  const auto& F = P.facets();
  const int m = static_cast<int>(F.size());
  Mat A = Mat::Zero(2 * m + 1, d + 1);
  Vec rhs(2 * m + 1);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(d) = F[i].normal.transpose();
    A(i, d) = -a.scale * F[i].offset;
    rhs(i) = F[i].normal.dot(a.center);
    A.row(m + i).head(d) = F[i].normal.transpose();
    A(m + i, d) = -b.scale * F[i].offset;
    rhs(m + i) = F[i].normal.dot(b.center);
  }
  A(2 * m, d) = -1.0;
  rhs(2 * m) = 0.0;
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  auto r = lp::minimize(A, rhs, c);
  if (!r.optimal()) return {std::numeric_limits<double>::infinity(), Vec(0.5 * (a.center + b.center))};
  return {r.x(d), r.x.head(d)};
}

GaugeMin minGaugeOver(const ConvexBody& P, const Homothet& q) {
  if (P.isBall()) {
    double n = q.center.norm();
    if (n <= q.scale) return {0.0, Vec::Zero(P.dim())};
    return {n - q.scale, Vec(q.center * ((n - q.scale) / n))};
  }
  const int d = P.dim();
  const auto& F = P.facets();
  const int m = static_cast<int>(F.size());
  Mat A = Mat::Zero(2 * m + 1, d + 1);
  Vec rhs(2 * m + 1);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(d) = F[i].normal.transpose();
    rhs(i) = F[i].offset;
    A.row(m + i).head(d) = q.scale * F[i].normal.transpose();
    A(m + i, d) = -F[i].offset;
    rhs(m + i) = -F[i].normal.dot(q.center);
  }
  A(2 * m, d) = -1.0;
  rhs(2 * m) = 0.0;
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  auto r = lp::minimize(A, rhs, c);
  if (!r.optimal()) throw std::runtime_error("gauge LP failed");
  return {r.value, Vec(q.apply(r.x.head(d)))};
}

}  // namespace nobeta
