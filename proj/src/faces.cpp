#include "nobeta/faces.hpp"

#include "nobeta/lp.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace nobeta {

namespace {

void requirePolytope(const ConvexBody& P, const char* what) {
  if (P.isBall()) throw InvalidArgument(std::string(what) + " needs a polytope body");
}

int affineRank(const std::vector<Vec>& pts) {
  if (pts.size() <= 1) return 0;
  std::vector<Vec> rows;
  for (size_t i = 1; i < pts.size(); ++i) rows.push_back(pts[i] - pts[0]);
  return rankOf(rows);
}

int incidenceCount(const ConvexBody& P, const Segment& s) {
  return static_cast<int>(facesContaining(P, s.x).size() + facesContaining(P, s.y).size());
}

Mat hcat(const std::vector<Mat>& parts, int d) {
  int cols = 0;
  for (const auto& p : parts) cols += static_cast<int>(p.cols());
  Mat M(d, cols);
  int c = 0;
  for (const auto& p : parts) {
    if (p.cols() == 0) continue;
    M.middleCols(c, p.cols()) = p;
    c += static_cast<int>(p.cols());
  }
  return M;
}

}  // namespace

int FaceLattice::count(int d) const {
  return static_cast<int>(std::count_if(faces.begin(), faces.end(), [&](const Face& f) { return f.dim == d; }));
}

int FaceLattice::faceWithActive(const std::vector<int>& active) const {
  std::vector<int> a = active;
  std::sort(a.begin(), a.end());
  for (const auto& f : faces)
    if (f.active == a) return f.id;
  return -1;
}

int rankOf(const std::vector<Vec>& rows, double tol) {
  if (rows.empty()) return 0;
  Mat M(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) M.row(i) = rows[i].transpose();
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  return r;
}

FaceLattice buildFaceLattice(const ConvexBody& P) {
  requirePolytope(P, "face lattice");
  if (P.dim() > 3) throw ResourceLimit("face lattice supports d <= 3");
  const int m = static_cast<int>(P.facets().size());
  if (m > kMaxLatticeFacets)
    throw ResourceLimit("face lattice supports at most " + std::to_string(kMaxLatticeFacets) + " facets, got " +
                        std::to_string(m));
  std::set<std::vector<int>> sets;
  std::vector<std::vector<int>> frontier;
  std::vector<std::vector<int>> facetSets;
  for (auto fv : P.facetVertices()) {
    std::sort(fv.begin(), fv.end());
    facetSets.push_back(fv);
    if (sets.insert(fv).second) frontier.push_back(fv);
  }
  // Close under intersection.
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    std::vector<std::vector<int>> all(sets.begin(), sets.end());
    for (const auto& a : frontier)
      for (const auto& b : all) {
        std::vector<int> c;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(c));
        if (!c.empty() && sets.insert(c).second) next.push_back(c);
      }
    frontier = std::move(next);
  }
  std::vector<int> everything(P.vertices().size());
  for (size_t i = 0; i < everything.size(); ++i) everything[i] = static_cast<int>(i);
  sets.insert(everything);

  FaceLattice L;
  L.dim = P.dim();
  for (const auto& vs : sets) {
    Face f;
    f.vertices = vs;
    std::vector<Vec> pts;
    for (int v : vs) pts.push_back(P.vertices()[v]);
    f.dim = affineRank(pts);
    for (int i = 0; i < m; ++i) {
      const auto& fv = facetSets[i];
      if (std::includes(fv.begin(), fv.end(), vs.begin(), vs.end())) f.active.push_back(i);
    }
    L.faces.push_back(f);
  }
  std::sort(L.faces.begin(), L.faces.end(), [](const Face& a, const Face& b) {
    return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices;
  });
  for (size_t i = 0; i < L.faces.size(); ++i) L.faces[i].id = static_cast<int>(i);
  L.covers.assign(L.faces.size(), {});
  for (const auto& a : L.faces)
    for (const auto& b : L.faces)
      if (b.dim == a.dim + 1 && std::includes(b.vertices.begin(), b.vertices.end(), a.vertices.begin(), a.vertices.end()))
        L.covers[a.id].push_back(b.id);
  return L;
}

std::vector<int> facesContaining(const ConvexBody& P, const Vec& x) {
  Homothet unit{Vec::Zero(P.dim()), 1.0};
  if (signedDistance(P, unit, x) > kTau) throw PreconditionViolation("point lies outside the body", x);
  std::vector<int> out;
  if (P.isBall()) return out;
  const auto& F = P.facets();
  for (int i = 0; i < static_cast<int>(F.size()); ++i)
    if (std::abs(F[i].normal.dot(x) - F[i].offset) <= kTau) out.push_back(i);
  return out;
}

bool TranslationBody::contains(const Vec& t, double tol) const {
  return ((A * t - b).array() <= tol).all();
}

std::vector<int> TranslationBody::activeAtZero(double tol) const {
  std::vector<int> out;
  for (int i = 0; i < b.size(); ++i)
    if (b(i) <= tol) out.push_back(i);
  return out;
}

TranslationBody translationBody(const ConvexBody& P, const Segment& seg) {
  requirePolytope(P, "translation body");
  const auto& F = P.facets();
  TranslationBody T;
  T.A.resize(F.size(), P.dim());
  T.b.resize(F.size());
  for (size_t i = 0; i < F.size(); ++i) {
    T.A.row(i) = F[i].normal.transpose();
    T.b(i) = F[i].offset - std::max(F[i].normal.dot(seg.x), F[i].normal.dot(seg.y));
  }
  return T;
}

bool isExtremeSegment(const ConvexBody& P, const Segment& seg) {
  if (!isMaximalSegment(P, seg)) throw PreconditionViolation("segment is not maximal");
  if (P.isBall()) return true;  // maximal chords are diameters and T = {0}
  TranslationBody T = translationBody(P, seg);
  std::vector<Vec> rows;
  for (int i : T.activeAtZero()) rows.push_back(T.A.row(i).transpose());
  return rankOf(rows) == P.dim();
}

std::vector<int> segmentFaceIncidence(const ConvexBody& P, const Segment& seg) {
  std::vector<int> out;
  if (P.isBall()) return out;
  const auto& F = P.facets();
  for (int i = 0; i < static_cast<int>(F.size()); ++i)
    if (std::abs(F[i].normal.dot(seg.x) - F[i].offset) <= kTau &&
        std::abs(F[i].normal.dot(seg.y) - F[i].offset) <= kTau)
      out.push_back(i);
  return out;
}

GSetResult gSetMembership(const ConvexBody& P, const Vec& x, const Vec& y, const std::vector<int>& Fin) {
  if ((y - x).norm() <= kTau) throw InvalidArgument("x and y must differ");
  std::vector<int> F = Fin;
  std::sort(F.begin(), F.end());
  F.erase(std::unique(F.begin(), F.end()), F.end());
  const int m = static_cast<int>(P.facets().size());
  for (int i : F)
    if (i < 0 || i >= m) throw InvalidArgument("facet index " + std::to_string(i) + " out of range");
  ChordResult ch = maxChord(P, y - x);
  if (ch.length <= kTau) throw InvalidArgument("degenerate chord in direction y - x");
  const double s = (y - x).norm() / ch.length;
  GSetResult res;
  if (P.isBall()) {
    res.patternsTried = 1;
    if (F.empty()) {
      res.member = true;
      res.witness = Homothet{0.5 * (x + y), s};
    }
    return res;
  }
  const int d = P.dim();
  const auto& Fa = P.facets();
  for (int i : F)
    if (std::abs(Fa[i].normal.dot(y - x)) > 1e-9) return res;
  std::vector<int> rest;
  for (int i = 0; i < m; ++i)
    if (!std::binary_search(F.begin(), F.end(), i)) rest.push_back(i);
  std::vector<double> hi(m);
  for (int i = 0; i < m; ++i) hi[i] = std::max(Fa[i].normal.dot(x), Fa[i].normal.dot(y));

  const int r = static_cast<int>(rest.size());
  const long long cap = 1LL << kMaxExhaustiveFacets;
  res.complete = r <= kMaxExhaustiveFacets;
  // Patterns E of extra touched facets, by increasing size, capped at 2^12.
  std::vector<std::vector<int>> patterns;
  for (int size = 0; size <= r && static_cast<long long>(patterns.size()) < cap; ++size) {
    std::vector<bool> pick(r, false);
    std::fill(pick.begin(), pick.begin() + size, true);
    do {
      std::vector<int> E;
      for (int k = 0; k < r; ++k)
        if (pick[k]) E.push_back(rest[k]);
      patterns.push_back(E);
    } while (std::prev_permutation(pick.begin(), pick.end()) && static_cast<long long>(patterns.size()) < cap);
  }
  if (static_cast<long long>(patterns.size()) >= cap && r > kMaxExhaustiveFacets) res.complete = false;

  for (const auto& E : patterns) {
    ++res.patternsTried;
    std::vector<Vec> rows;
    for (int i : F) rows.push_back(Fa[i].normal);
    bool ok = true;
    for (int i : E) {
      if (std::abs(Fa[i].normal.dot(y - x)) <= 1e-9) ok = false;  // would touch with both endpoints
      rows.push_back(Fa[i].normal);
    }
    if (!ok || rankOf(rows) < d) continue;
    std::vector<char> inE(m, 0);
    for (int i : E) inE[i] = 1;
    const int nEq = static_cast<int>(F.size() + E.size());
    const int nStrict = r - static_cast<int>(E.size());
    Mat A = Mat::Zero(2 * nEq + nStrict + 1, d + 1);
    Vec b(2 * nEq + nStrict + 1);
    int row = 0;
    auto eq = [&](int i) {
      double rhs = hi[i] - s * Fa[i].offset;
      A.row(row).head(d) = Fa[i].normal.transpose();
      b(row++) = rhs;
      A.row(row).head(d) = -Fa[i].normal.transpose();
      b(row++) = -rhs;
    };
    for (int i : F) eq(i);
    for (int i : E) eq(i);
    for (int i : rest) {
      if (inE[i]) continue;
      A.row(row).head(d) = -Fa[i].normal.transpose();
      A(row, d) = 1.0;
      b(row++) = s * Fa[i].offset - hi[i];
    }
    A(row, d) = 1.0;
    b(row++) = 1.0;
    Vec c = Vec::Zero(d + 1);
    c(d) = 1.0;
    auto sol = lp::maximize(A, b, c);
    if (!sol.optimal()) continue;
    if (nStrict > 0 && sol.x(d) <= 1e-9) continue;
    Homothet w{sol.x.head(d), s};
    Segment local{(x - w.center) / s, (y - w.center) / s};
    Homothet unit{Vec::Zero(d), 1.0};
    if (signedDistance(P, unit, local.x) > 1e-8 || signedDistance(P, unit, local.y) > 1e-8) continue;
    if (segmentFaceIncidence(P, local) != F) continue;
    if (!isExtremeSegment(P, local)) continue;
    res.member = true;
    res.witness = w;
    return res;
  }
  return res;
}

Extremalized extremalize(const ConvexBody& P, const Segment& seg) {
  if (!isMaximalSegment(P, seg)) throw PreconditionViolation("segment is not maximal");
  Extremalized out;
  out.seg = seg;
  if (P.isBall()) return out;
  const int d = P.dim();
  const int m = static_cast<int>(P.facets().size());
  out.incidenceCounts.push_back(incidenceCount(P, seg));
  for (int it = 0; it <= m; ++it) {
    TranslationBody T = translationBody(P, out.seg);
    std::vector<int> act = T.activeAtZero();
    std::vector<Vec> rows;
    for (int i : act) rows.push_back(T.A.row(i).transpose());
    if (rankOf(rows) == d) return out;
    // Lexicographic minimum over the face of T that contains 0.
    Mat A(T.A.rows() + static_cast<Eigen::Index>(act.size()), d);
    Vec b(A.rows());
    A.topRows(T.A.rows()) = T.A;
    b.head(T.b.size()) = T.b.cwiseMax(0.0);
    for (size_t k = 0; k < act.size(); ++k) {
      b(act[k]) = 0.0;
      A.row(T.A.rows() + k) = -T.A.row(act[k]);
      b(T.A.rows() + k) = 0.0;
    }
    auto sol = lp::lexMinimize(A, b, Mat::Identity(d, d));
    if (!sol.optimal()) throw std::runtime_error("extremalize: erosion LP failed");
    out.seg = {out.seg.x + sol.x, out.seg.y + sol.x};
    ++out.iterations;
    out.incidenceCounts.push_back(incidenceCount(P, out.seg));
  }
  throw std::runtime_error("extremalize did not reach an extreme segment");
}

Mat orthonormalBasis(const Mat& spanning, double tol) {
  if (spanning.cols() == 0) return Mat(spanning.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(spanning, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  return svd.matrixU().leftCols(r);
}

Mat nullSpaceOfRows(const std::vector<Vec>& rows, int d, double tol) {
  if (rows.empty()) return Mat::Identity(d, d);
  Mat M(rows.size(), d);
  for (size_t i = 0; i < rows.size(); ++i) M.row(i) = rows[i].transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  return svd.matrixV().rightCols(d - r);
}

Mat intersectSubspaces(const Mat& a, const Mat& b, double tol) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() == 0 || b.cols() == 0) return Mat(d, 0);
  Mat M(d, a.cols() + b.cols());
  M << a, -b;
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  Mat N = svd.matrixV().rightCols(M.cols() - r);
  return orthonormalBasis(a * N.topRows(a.cols()), tol);
}

AffineSubspace AffineSubspace::make(const Vec& origin, const Mat& spanning) {
  return {origin, orthonormalBasis(spanning)};
}

AffineSubspace AffineSubspace::whole(int d) { return {Vec::Zero(d), Mat::Identity(d, d)}; }

bool AffineSubspace::contains(const Vec& p, double tol) const {
  Vec r = p - origin;
  if (basis.cols() > 0) r -= basis * (basis.transpose() * r);
  return r.norm() <= tol;
}

int affineHullDimension(const AffineSubspace& s1, const AffineSubspace& s2) {
  const int d = static_cast<int>(s1.origin.size());
  Mat M(d, s1.basis.cols() + s2.basis.cols() + 1);
  M << s1.basis, s2.basis, (s2.origin - s1.origin);
  return static_cast<int>(orthonormalBasis(M).cols());
}

bool CriticalFamily::covers(const Vec& x, const Vec& y, double tol) const {
  Vec v = y - x;
  for (const auto& M : members) {
    Vec r = v - M.basis * (M.basis.transpose() * v);
    if (r.norm() <= tol * std::max(1.0, v.norm())) return true;
  }
  return false;
}

CriticalFamily criticalSubspaces(const ConvexBody& P, const AffineSubspace& S) {
  if (S.dim() < 2) throw InvalidArgument("critical subspaces need dim(S) >= 2");
  CriticalFamily fam;
  fam.S = S;
  if (P.isBall()) return fam;
  const int d = P.dim();
  FaceLattice L = buildFaceLattice(P);
  const Mat& S0 = S.basis;
  const int dimS = S.dim();
  struct Info {
    Mat lin;    // linear part of the face's affine hull
    Mat linS;   // lin cap S0
    Vec point;  // a point of the face's affine hull inside S
    bool meetsS = false;
  };
  std::vector<Info> info;
  for (const auto& f : L.faces) {
    if (f.active.empty()) continue;  // the top face is not on the boundary
    std::vector<Vec> rows;
    for (int i : f.active) rows.push_back(P.facets()[i].normal);
    Info in;
    in.lin = nullSpaceOfRows(rows, d);
    in.linS = intersectSubspaces(in.lin, S0);
    // The choice of base point matters unless it lies in S, so solve for aff(face) cap S.
    Mat N(rows.size(), d);
    Vec off(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      N.row(k) = rows[k].transpose();
      off(k) = P.facets()[f.active[k]].offset;
    }
    Mat G = N * S0;
    Vec rhs = off - N * S.origin;
    Vec beta = G.colPivHouseholderQr().solve(rhs);
    in.point = S.origin + S0 * beta;
    in.meetsS = (N * in.point - off).norm() <= 1e-9;
    info.push_back(in);
  }
  Mat projOut = Mat::Identity(d, d) - S0 * S0.transpose();
  std::vector<Mat> kept;
  for (const auto& A : info) {
    for (const auto& B : info) {
      ++fam.pairsExamined;
      if (!A.meetsS || !B.meetsS) continue;
      if (A.linS.cols() + B.linS.cols() > dimS - 2) continue;
      ++fam.pairsQualified;
      // ((a_B - a_A) + lin_B) cap S0 = p + (lin_B cap S0) when nonempty.
      Vec c = B.point - A.point;
      std::vector<Mat> parts = {A.linS, B.linS};
      Vec p = c;
      if (B.lin.cols() > 0) {
        Mat G = projOut * B.lin;
        Vec beta = G.colPivHouseholderQr().solve(-projOut * c);
        p = c + B.lin * beta;
      }
      if ((projOut * p).norm() <= 1e-9) {
        Mat pm(d, 1);
        pm.col(0) = p;
        parts.push_back(pm);
      }
      Mat T = orthonormalBasis(hcat(parts, d));
      if (T.cols() == 0 || T.cols() > dimS - 1) continue;
      // Pad to codimension one inside S0 with S0's own basis vectors.
      for (int k = 0; k < S0.cols() && T.cols() < dimS - 1; ++k) {
        Mat ext(d, T.cols() + 1);
        ext << T, S0.col(k);
        Mat U = orthonormalBasis(ext);
        if (U.cols() > T.cols()) T = U;
      }
      bool dup = false;
      Mat PT = T * T.transpose();
      for (const auto& K : kept) dup = dup || (K * K.transpose() - PT).norm() <= 1e-9;
      if (dup) continue;
      kept.push_back(T);
      fam.members.push_back({S.origin, T});
    }
  }
  return fam;
}

DimensionReport dimensionLemmaCheck(const ConvexBody& P, const Segment& seg, const AffineSubspace& S) {
  requirePolytope(P, "dimension check");
  if (!S.contains(seg.x) || !S.contains(seg.y)) throw PreconditionViolation("segment endpoints are not in S");
  if (!isExtremeSegment(P, seg)) throw PreconditionViolation("segment is not extreme");
  auto dimAt = [&](const Vec& x) {
    std::vector<Vec> rows;
    for (int i : facesContaining(P, x)) rows.push_back(P.facets()[i].normal);
    return static_cast<int>(intersectSubspaces(nullSpaceOfRows(rows, P.dim()), S.basis).cols());
  };
  DimensionReport r;
  r.dimX = dimAt(seg.x);
  r.dimY = dimAt(seg.y);
  r.dimS = S.dim();
  r.holds = r.dimX + r.dimY <= r.dimS - 1;
  return r;
}

double faceChord(const ConvexBody& P, const std::vector<int>& active, const Vec& u) {
  requirePolytope(P, "face chord");
  const int d = P.dim();
  const Vec uh = u.normalized();
  const auto& F = P.facets();
  const int m = static_cast<int>(F.size());
  const int na = static_cast<int>(active.size());
  Mat A = Mat::Zero(2 * m + 2 * na, d + 1);
  Vec b(A.rows());
  int row = 0;
  for (int i = 0; i < m; ++i) {
    A.row(row).head(d) = F[i].normal.transpose();
    b(row++) = F[i].offset;
    A.row(row).head(d) = F[i].normal.transpose();
    A(row, d) = F[i].normal.dot(uh);
    b(row++) = F[i].offset;
  }
  for (int i : active) {
    A.row(row).head(d) = -F[i].normal.transpose();
    b(row++) = -F[i].offset;
    A.row(row).head(d) = -F[i].normal.transpose();
    A(row, d) = -F[i].normal.dot(uh);
    b(row++) = -F[i].offset;
  }
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  auto r = lp::maximize(A, b, c);
  return r.optimal() ? std::max(0.0, r.value) : 0.0;
}

}  // namespace nobeta
