#pragma once

#include "nobeta/common.hpp"

#include <string>
#include <vector>

namespace nobeta {

struct TargetSet {
  std::vector<Vec> points;
  double eps = 0.0;
  std::string generator;
  int dim = 2;

  // Throws InvalidArgument on eps <= 0, mixed dimensions or duplicates.
  void validate() const;
  TargetSet subset(const std::vector<int>& idx) const;
  double diameter() const;
};

}  // namespace nobeta
