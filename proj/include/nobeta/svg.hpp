#pragma once

#include "nobeta/body.hpp"
#include "nobeta/derivative.hpp"
#include "nobeta/game.hpp"
#include "nobeta/target.hpp"

#include <string>
#include <vector>

namespace nobeta::svg {

// Planar scene in world coordinates, written as SVG 1.1 with y pointing up.
class Scene {
 public:
  explicit Scene(double pixels = 640.0) : pixels_(pixels) {}
  void copy(const ConvexBody& P, const Homothet& h, const std::string& style);
  void point(const Vec& p, double radiusPx, const std::string& style);
  void segment(const Vec& a, const Vec& b, const std::string& style);
  void label(const Vec& p, const std::string& text);
  // Bounding box of everything added so far, padded by 5%.
  std::string str() const;

 private:
  struct Item {
    enum class Kind { Polygon, Circle, Dot, Line, Text } kind;
    std::vector<Vec> pts;
    double r = 0.0;
    std::string style;
    std::string text;
  };
  void grow(const Vec& p);
  double pixels_;
  std::vector<Item> items_;
  Vec lo_, hi_;
};

// Moves as outlines (I solid, II dashed), survivors filled, deleted points hollow.
std::string renderRun(const ConvexBody& P, const TargetSet& target, const RunRecord& rec);
// The copy, its boundary band, B(Q) and the covering copy of the projections.
std::string renderGoodCopy(const ConvexBody& P, const TargetSet& target, const GoodCopyCertificate& cert);
// Points shaded by the stage at which they leave the derivative sequence.
std::string renderTrace(const ConvexBody& P, const TargetSet& target, const DerivativeTrace& trace);

}  // namespace nobeta::svg
