#include "nobeta/target.hpp"

#include <algorithm>

namespace nobeta {

void TargetSet::validate() const {
  if (!(eps > 0.0)) throw InvalidArgument("target eps must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim)
      throw InvalidArgument("target point " + std::to_string(i) + " has wrong dimension");
    if (!points[i].allFinite()) throw InvalidArgument("target point " + std::to_string(i) + " is not finite");
  }
  // Sort by first coordinate so the duplicate scan is near linear.
  std::vector<int> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return points[a](0) < points[b](0); });
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (points[order[b]](0) - points[order[a]](0) > kTau) break;
      if ((points[order[a]] - points[order[b]]).norm() <= kTau)
        throw InvalidArgument("target points " + std::to_string(std::min(order[a], order[b])) + " and " +
                              std::to_string(std::max(order[a], order[b])) + " coincide");
    }
  }
}

TargetSet TargetSet::subset(const std::vector<int>& idx) const {
  TargetSet t;
  t.eps = eps;
  t.dim = dim;
  t.generator = generator;
  for (int i : idx) t.points.push_back(points.at(i));
  return t;
}

double TargetSet::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, (points[i] - points[j]).norm());
  return d;
}

}  // namespace nobeta
