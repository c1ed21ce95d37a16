#include "nobeta/lp.hpp"
#include "nobeta/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace nobeta;

namespace {

// Vertex enumeration oracle for bounded 2D problems.
double bruteMax2d(const Mat& A, const Vec& b, const Vec& c) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d M;
      M << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
      if (std::abs(M.determinant()) < 1e-12) continue;
      Eigen::Vector2d x = M.inverse() * Eigen::Vector2d(b(i), b(j));
      if (((A * Vec(x)) - b).maxCoeff() <= 1e-9) best = std::max(best, c.dot(Vec(x)));
    }
  }
  return best;
}

}  // namespace

TEST(Lp, BoxMaximum) {
  Mat A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  Vec b = vec({1, 2, 1, 1});
  auto r = lp::maximize(A, b, vec({1, 1}));
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 3.0, 1e-12);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
  EXPECT_NEAR(r.x(1), 2.0, 1e-12);
}

TEST(Lp, DetectsUnbounded) {
  Mat A(1, 2);
  A << 0, 1;
  auto r = lp::maximize(A, vec({1}), vec({1, 0}));
  EXPECT_EQ(r.status, lp::Status::Unbounded);
}

TEST(Lp, DetectsInfeasible) {
  Mat A(2, 1);
  A << 1, -1;
  auto r = lp::maximize(A, vec({-1, -1}), vec({1}));
  EXPECT_EQ(r.status, lp::Status::Infeasible);
  EXPECT_FALSE(lp::feasiblePoint(A, vec({-1, -1})).has_value());
}

TEST(Lp, RedundantRows) {
  Mat A(6, 2);
  A << 1, 0, 1, 0, 0, 1, 0, 1, -1, 0, 0, -1;
  Vec b = vec({1, 1, 1, 1, 0, 0});
  auto r = lp::maximize(A, b, vec({2, 1}));
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 3.0, 1e-12);
}

TEST(Lp, MatchesVertexEnumeration2d) {
  CounterRng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 3 + static_cast<int>(rng.below(10));
    Mat A(m + 4, 2);
    Vec b(m + 4);
    for (int i = 0; i < m; ++i) {
      A(i, 0) = rng.uniform(-1, 1);
      A(i, 1) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-0.2, 1.0);
    }
    A.block(m, 0, 4, 2) << 1, 0, 0, 1, -1, 0, 0, -1;
    b.tail(4).setConstant(3.0);
    Vec c = vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    double oracle = bruteMax2d(A, b, c);
    auto r = lp::maximize(A, b, c);
    if (std::isinf(oracle)) {
      EXPECT_EQ(r.status, lp::Status::Infeasible) << trial;
    } else {
      ASSERT_TRUE(r.optimal()) << trial;
      EXPECT_NEAR(r.value, oracle, 1e-8) << trial;
      EXPECT_LE((A * r.x - b).maxCoeff(), 1e-8);
    }
  }
}

TEST(Lp, LexicographicFace) {
  // min x then min y over x >= 0, -1 <= y <= 1, x + y >= -1
  Mat A(4, 2);
  A << -1, 0, 0, 1, 0, -1, -1, -1;
  Vec b = vec({0, 1, 1, 1});
  Mat C(2, 2);
  C << 1, 0, 0, 1;
  auto r = lp::lexMinimize(A, b, C);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.x(0), 0.0, 1e-12);
  EXPECT_NEAR(r.x(1), -1.0, 1e-12);
}
