#pragma once

#include "nobeta/common.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nobeta {

// Cones C(p) cut out by hyperplanes through the origin. Only full-dimensional
// patterns are stored, each with first sign +1; C(-p) is the negative half.
struct ConeFamily {
  int dim = 0;
  std::vector<Vec> normals;
  std::vector<std::vector<int>> patterns;  // entries +1 / -1
  std::vector<Vec> representatives;        // unit interior direction of each positive half
  int size() const { return static_cast<int>(patterns.size()); }
  int find(const std::vector<int>& pattern) const;  // -1 when absent
};

inline constexpr int kMaxConeNormals = 16;

ConeFamily buildConeFamily(const std::vector<Vec>& normals);
// Lines through the origin spaced so that every planar cone is narrower than
// maxAngle; each seed direction is one of the lines.
ConeFamily refinedFamily2D(double maxAngle, const std::vector<Vec>& seedDirections = {});
// Largest angle between consecutive lines of a planar family.
double maxAngularWidth2D(const ConeFamily& fam);
// Largest angle allowed by 1 - cos(theta) < delta^2 / 2.
double angleForDelta(double delta);

struct ConeMembership {
  int cone = -1;
  int sign = 1;
  bool interior = true;  // false when y - x lies on some hyperplane
};
ConeMembership coneOf(const ConeFamily& fam, const Vec& x, const Vec& y);

struct ColoredPointSet {
  std::vector<Vec> points;
  int colors = 1;
  double r = 0.0;
  int k = 0;
  std::vector<std::uint8_t> color;  // n*n, symmetric, values 1..colors
  std::vector<std::int8_t> side;    // optional n*n, antisymmetric signs

  int size() const { return static_cast<int>(points.size()); }
  int c(int a, int b) const { return color[static_cast<size_t>(a) * points.size() + b]; }
  int s(int a, int b) const { return side[static_cast<size_t>(a) * points.size() + b]; }
  bool hasSides() const { return !side.empty(); }
  void validate() const;

  static ColoredPointSet fromFunction(std::vector<Vec> points, int colors,
                                      const std::function<int(int, int)>& fn, double r, int k);
  // Color of {x, y} is 1 + the cone of y - x; side is the sign of y - x.
  static ColoredPointSet fromCones(std::vector<Vec> points, const ConeFamily& fam, double r, int k);
};

enum class ThinningMode {
  Fixpoint,   // iterate deletion until every kept point has > k partners in B itself
  BothSides,  // one deletion pass; > k partners on each side within the stage set
};

struct ThinningStage {
  int color = 0;
  std::vector<int> deleted;  // points removed by this color's deletion
  int side = 0;              // BothSides: the isolating side fixed when the stage continues
  bool continued = false;    // the deleted set became the next stage set
};

struct ThinningResult {
  bool success = false;
  std::string status;          // "ok", "infeasible-parameters", "exhausted", "below-floor"
  std::vector<int> B;
  int color = 0;
  std::vector<int> reference;  // stage set the predicate refers to
  int floor = 0;
  std::vector<ThinningStage> audit;
};

int thinningFloor(const ColoredPointSet& data);
ThinningResult thinningHomogeneous(const ColoredPointSet& data, ThinningMode mode = ThinningMode::Fixpoint);
// reference defaults to B.
bool verifyPartialHomogeneity(const ColoredPointSet& data, const std::vector<int>& B, int color,
                              ThinningMode mode = ThinningMode::Fixpoint,
                              const std::vector<int>* reference = nullptr);

}  // namespace nobeta
