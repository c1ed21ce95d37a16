#pragma once

#include "nobeta/body.hpp"

#include <optional>
#include <vector>

namespace nobeta {

struct Face {
  int id = 0;
  std::vector<int> active;    // facet indices whose hyperplanes contain the face
  int dim = 0;
  std::vector<int> vertices;  // vertex ids
};

// Faces ordered by dimension, then by vertex ids. The top face (P itself,
// no active facets) comes last. Facets of P have a single active index.
struct FaceLattice {
  int dim = 0;
  std::vector<Face> faces;
  std::vector<std::vector<int>> covers;  // covers[i]: ids of faces one dimension up containing face i
  int count(int dim) const;
  int faceWithActive(const std::vector<int>& active) const;  // -1 when absent
};

inline constexpr int kMaxLatticeFacets = 32;

FaceLattice buildFaceLattice(const ConvexBody& P);

// Active facets at x. Empty for interior points.
std::vector<int> facesContaining(const ConvexBody& P, const Vec& x);

// Erosion T(seg) = {t : seg + t inside P} as rows A t <= b.
struct TranslationBody {
  Mat A;
  Vec b;
  bool contains(const Vec& t, double tol = kTau) const;
  std::vector<int> activeAtZero(double tol = 1e-9) const;
};
TranslationBody translationBody(const ConvexBody& P, const Segment& seg);

int rankOf(const std::vector<Vec>& rows, double tol = 1e-9);

bool isExtremeSegment(const ConvexBody& P, const Segment& seg);
std::vector<int> segmentFaceIncidence(const ConvexBody& P, const Segment& seg);

struct GSetResult {
  bool member = false;
  std::optional<Homothet> witness;
  bool complete = true;  // false when the pattern search was capped
  int patternsTried = 0;
};
inline constexpr int kMaxExhaustiveFacets = 12;
GSetResult gSetMembership(const ConvexBody& P, const Vec& x, const Vec& y, const std::vector<int>& F);

struct Extremalized {
  Segment seg;
  int iterations = 0;
  std::vector<int> incidenceCounts;  // endpoint-facet incidences after each step, starting with the input
};
Extremalized extremalize(const ConvexBody& P, const Segment& seg);

struct AffineSubspace {
  Vec origin;
  Mat basis;  // orthonormal columns
  int dim() const { return static_cast<int>(basis.cols()); }
  bool contains(const Vec& p, double tol = 1e-8) const;
  static AffineSubspace make(const Vec& origin, const Mat& spanning);  // orthonormalizes, drops dependent columns
  static AffineSubspace whole(int d);
};

// Linear subspace helpers on column-basis matrices.
Mat orthonormalBasis(const Mat& spanning, double tol = 1e-9);
Mat intersectSubspaces(const Mat& a, const Mat& b, double tol = 1e-9);
Mat nullSpaceOfRows(const std::vector<Vec>& rows, int d, double tol = 1e-9);
int affineHullDimension(const AffineSubspace& s1, const AffineSubspace& s2);

struct CriticalFamily {
  AffineSubspace S;
  std::vector<AffineSubspace> members;  // each of dimension dim(S) - 1, translated into S
  int pairsExamined = 0;
  int pairsQualified = 0;
  // True when y lies in the member's translate through x.
  bool covers(const Vec& x, const Vec& y, double tol = 1e-8) const;
};
CriticalFamily criticalSubspaces(const ConvexBody& P, const AffineSubspace& S);

struct DimensionReport {
  int dimX = 0;
  int dimY = 0;
  int dimS = 0;
  bool holds = false;  // dimX + dimY <= dimS - 1
};
DimensionReport dimensionLemmaCheck(const ConvexBody& P, const Segment& seg, const AffineSubspace& S);

// Longest chord in direction u lying in the face with the given active facets.
double faceChord(const ConvexBody& P, const std::vector<int>& active, const Vec& u);

}  // namespace nobeta
