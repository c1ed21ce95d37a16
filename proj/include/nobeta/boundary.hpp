#pragma once

#include "nobeta/body.hpp"

namespace nobeta {

struct DeltaOptions {
  int directions2d = 720;
  int icosphereLevel = 4;  // 2562 directions
  double maximalTol = 1e-7;
};

struct DeltaResult {
  double value = 0.0;
  double uncertainty = 0.0;
  Vec point;                    // boundary point (deltaGlobal: the argmin)
  Vec direction;                // maximal chord direction attaining value
  std::vector<Vec> maximal;     // maximal chord directions found at the point
  bool found = true;            // false if sampling found no maximal chord
};

DeltaResult deltaAt(const ConvexBody& P, const Vec& x, const DeltaOptions& opt = {});
DeltaResult deltaGlobal(const ConvexBody& P, const DeltaOptions& opt = {});
std::vector<Vec> boundarySamples(const ConvexBody& P);
std::vector<Vec> icosphere(int level);

struct Tangents {
  Vec left;
  Vec right;
};
Tangents tangents2D(const ConvexBody& P, const Vec& x);

struct Exceptional {
  std::vector<Vec> F;
  double delta = 0.0;
  std::optional<double> eta;  // none when no point of F has a non-maximal tangent
  std::vector<Vec> tangentDirections;  // all l_x, r_x at points of F
};
Exceptional exceptionalPoints2D(const ConvexBody& P, const DeltaOptions& opt = {});

struct ScaleBound {
  bool holds = false;
  double delta = 0.0;
  double eps = 0.0;
  Vec lineDir;
  double chordP = 0.0;      // |L cap P|
  double chordInner = 0.0;  // |L cap (1-eps)P|
  double chordQ = 0.0;      // |L cap Q|
};
ScaleBound scaleBoundCheck(const ConvexBody& P, const Homothet& q, double eps);

struct Contact {
  enum class Kind { Empty, SinglePoint, SupportingSegments, FacetSet };
  Kind kind = Kind::Empty;
  std::vector<Vec> points;
  std::vector<Segment> segments;
  std::vector<int> facets;
};
std::string contactKindName(Contact::Kind k);
Contact homothetBoundaryContact(const ConvexBody& P, const Homothet& p, const Homothet& q);

}  // namespace nobeta
