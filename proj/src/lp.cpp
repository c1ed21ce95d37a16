#include "nobeta/lp.hpp"

#include <cmath>
#include <limits>

namespace nobeta::lp {
namespace {

constexpr double kPivotEps = 1e-11;

struct Tableau {
  int rows;
  int ycols;
  int cols;  // ycols + rows artificials
  Mat t;     // rows x (cols + 1), last column is the right-hand side
  Vec z;     // reduced costs, z(cols) = -objective
  std::vector<int> basis;

  void pivot(int pr, int pc) {
    t.row(pr) /= t(pr, pc);
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      double f = t(r, pc);
      if (f != 0.0) t.row(r) -= f * t.row(pr);
    }
    double f = z(pc);
    if (f != 0.0) z -= f * t.row(pr).transpose();
    basis[pr] = pc;
  }

  void price(const Vec& cost) {
    z = Vec::Zero(cols + 1);
    z.head(cols) = cost;
    for (int r = 0; r < rows; ++r) {
      double cb = cost(basis[r]);
      if (cb != 0.0) z -= cb * t.row(r).transpose();
    }
  }

  // Returns false when the entering column is unbounded.
  bool run(int enterLimit, bool& unbounded) {
    unbounded = false;
    const int maxIter = 200 * (cols + rows + 4);
    for (int it = 0; it < maxIter; ++it) {
      int pc = -1;
      for (int j = 0; j < enterLimit; ++j) {
        if (z(j) < -1e-10) {
          pc = j;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows; ++r) {
        double a = t(r, pc);
        if (a > kPivotEps) {
          double ratio = t(r, cols) / a;
          if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && basis[r] < basis[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) {
        unbounded = true;
        return false;
      }
      pivot(pr, pc);
    }
    throw std::runtime_error("lp: iteration limit");
  }
};

Result solveDual(const Mat& A, const Vec& b, const Vec& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Result res;
  if (m == 0) {
    if (c.cwiseAbs().maxCoeff() <= kPivotEps) {
      res.status = Status::Optimal;
      res.x = Vec::Zero(n);
    } else {
      res.status = Status::Unbounded;
    }
    return res;
  }
  Tableau tab;
  tab.rows = n;
  tab.ycols = m;
  tab.cols = m + n;
  tab.t = Mat::Zero(n, m + n + 1);
  tab.basis.resize(n);
  std::vector<double> sign(n, 1.0);
  for (int r = 0; r < n; ++r) {
    sign[r] = c(r) < 0 ? -1.0 : 1.0;
    for (int j = 0; j < m; ++j) tab.t(r, j) = sign[r] * A(j, r);
    tab.t(r, m + r) = 1.0;
    tab.t(r, m + n) = sign[r] * c(r);
    tab.basis[r] = m + r;
  }

  Vec cost1 = Vec::Zero(m + n);
  cost1.tail(n).setOnes();
  tab.price(cost1);
  bool unbounded = false;
  tab.run(m + n, unbounded);
  double infeas = -tab.z(m + n);
  double scale = 1.0 + c.cwiseAbs().maxCoeff();
  if (infeas > 1e-9 * scale) {
    res.status = Status::Infeasible;  // dual infeasible; caller distinguishes
    return res;
  }
  for (int r = 0; r < n; ++r) {
    if (tab.basis[r] < m) continue;
    for (int j = 0; j < m; ++j) {
      if (std::abs(tab.t(r, j)) > 1e-9) {
        tab.pivot(r, j);
        break;
      }
    }
  }

  Vec cost2 = Vec::Zero(m + n);
  cost2.head(m) = b;
  tab.price(cost2);
  tab.run(m, unbounded);
  if (unbounded) {
    res.status = Status::Infeasible;  // dual unbounded: primal infeasible
    return res;
  }
  res.status = Status::Optimal;
  res.x.resize(n);
  for (int r = 0; r < n; ++r) res.x(r) = -sign[r] * tab.z(m + r);
  res.value = 0.0;
  for (int r = 0; r < n; ++r) {
    if (tab.basis[r] < m) res.value += b(tab.basis[r]) * tab.t(r, m + n);
  }
  return res;
}

}  // namespace

Result maximize(const Mat& A, const Vec& b, const Vec& c) {
  Result res = solveDual(A, b, c);
  if (res.status == Status::Optimal) return res;
  if (c.cwiseAbs().maxCoeff() == 0.0) {
    res.status = Status::Infeasible;
    return res;
  }
  Result feas = solveDual(A, b, Vec::Zero(A.cols()));
  res.status = feas.status == Status::Optimal ? Status::Unbounded : Status::Infeasible;
  return res;
}

Result minimize(const Mat& A, const Vec& b, const Vec& c) {
  Result res = maximize(A, b, -c);
  res.value = -res.value;
  return res;
}

std::optional<Vec> feasiblePoint(const Mat& A, const Vec& b) {
  Result res = solveDual(A, b, Vec::Zero(A.cols()));
  if (res.status != Status::Optimal) return std::nullopt;
  return res.x;
}

Result lexMinimize(const Mat& A, const Vec& b, const Mat& C) {
  Mat Acur = A;
  Vec bcur = b;
  Result res;
  for (Eigen::Index k = 0; k < C.rows(); ++k) {
    Vec obj = C.row(k).transpose();
    res = minimize(Acur, bcur, obj);
    double slack = 0.0;
    for (int attempt = 0; !res.optimal() && k > 0 && attempt < 10; ++attempt) {
      slack = slack == 0.0 ? 1e-12 * (1.0 + std::abs(bcur(bcur.size() - 1))) : slack * 10.0;
      Vec bwide = bcur;
      bwide(bwide.size() - 1) += slack;
      res = minimize(Acur, bwide, obj);
      if (res.optimal()) bcur = bwide;
    }
    if (!res.optimal()) return res;
    Acur.conservativeResize(Acur.rows() + 1, Eigen::NoChange);
    Acur.row(Acur.rows() - 1) = obj.transpose();
    bcur.conservativeResize(bcur.size() + 1);
    bcur(bcur.size() - 1) = res.value;
  }
  return res;
}

}  // namespace nobeta::lp
