#pragma once

#include "nobeta/common.hpp"

namespace nobeta::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Vec x;
  double value = 0.0;
  bool optimal() const { return status == Status::Optimal; }
};

// maximize c.x subject to A x <= b with x free. Small dense problems only:
// the dual (n equality rows) is solved by a two-phase tableau simplex with
// Bland's rule.
Result maximize(const Mat& A, const Vec& b, const Vec& c);
Result minimize(const Mat& A, const Vec& b, const Vec& c);

// Minimizes the rows of C in order, each restricted to the optimal set of
// the previous ones. The returned value is that of the last objective.
Result lexMinimize(const Mat& A, const Vec& b, const Mat& C);

std::optional<Vec> feasiblePoint(const Mat& A, const Vec& b);

}  // namespace nobeta::lp
