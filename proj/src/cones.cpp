#include "nobeta/cones.hpp"

#include "nobeta/lp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace nobeta {

namespace {

constexpr double kPi = std::numbers::pi;

double lineAngle(const Vec& dir) {
  double a = std::atan2(dir(1), dir(0));
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

std::vector<int> signs(const std::vector<Vec>& normals, const Vec& v, bool* tie) {
  std::vector<int> q(normals.size());
  double scale = v.norm();
  for (size_t i = 0; i < normals.size(); ++i) {
    double s = normals[i].dot(v);
    if (std::abs(s) <= kTau * scale) {
      if (tie) *tie = true;
      q[i] = 1;
    } else {
      q[i] = s > 0 ? 1 : -1;
    }
  }
  return q;
}

std::vector<std::vector<int>> neighborLists(const ColoredPointSet& data) {
  const int n = data.size();
  std::vector<std::vector<int>> nbr(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((data.points[a] - data.points[b]).norm() <= data.r) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
      }
  return nbr;
}

}  // namespace

int ConeFamily::find(const std::vector<int>& pattern) const {
  for (int i = 0; i < size(); ++i)
    if (patterns[i] == pattern) return i;
  return -1;
}

ConeFamily buildConeFamily(const std::vector<Vec>& normalsIn) {
  if (normalsIn.empty()) throw InvalidArgument("cone family needs at least one normal");
  ConeFamily fam;
  fam.dim = static_cast<int>(normalsIn[0].size());
  for (const auto& n : normalsIn) {
    if (n.size() != fam.dim) throw InvalidArgument("normals have mixed dimensions");
    if (n.norm() <= kTau) throw InvalidArgument("zero normal");
    fam.normals.push_back(n.normalized());
  }
  const int k = static_cast<int>(fam.normals.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const Vec& a = fam.normals[i];
      const Vec& b = fam.normals[j];
      if ((a - a.dot(b) * b).norm() <= 1e-9)
        throw InvalidArgument("normals " + std::to_string(i) + " and " + std::to_string(j) + " are duplicates up to sign");
    }
  auto add = [&](std::vector<int> q, Vec v) {
    if (q[0] < 0) {
      for (int& s : q) s = -s;
      v = -v;
    }
    if (fam.find(q) < 0) {
      fam.patterns.push_back(q);
      fam.representatives.push_back(v.normalized());
    }
  };
  if (fam.dim == 2) {
    std::vector<double> th;
    for (const auto& n : fam.normals) th.push_back(lineAngle(vec({-n(1), n(0)})));
    std::sort(th.begin(), th.end());
    for (int j = 0; j < k; ++j) {
      double lo = th[j], hi = j + 1 < k ? th[j + 1] : th[0] + kPi;
      double mid = 0.5 * (lo + hi);
      Vec v = vec({std::cos(mid), std::sin(mid)});
      add(signs(fam.normals, v, nullptr), v);
    }
    return fam;
  }
  if (k > kMaxConeNormals) throw ResourceLimit("cone families beyond the plane support at most 16 normals");
  const int d = fam.dim;
  for (long mask = 0; mask < (1L << (k - 1)); ++mask) {
    std::vector<int> p(k, 1);
    for (int i = 1; i < k; ++i) p[i] = (mask >> (i - 1) & 1) ? -1 : 1;
    Mat A = Mat::Zero(k + 2 * d + 1, d + 1);
    Vec b = Vec::Zero(A.rows());
    for (int i = 0; i < k; ++i) {
      A.row(i).head(d) = -p[i] * fam.normals[i].transpose();
      A(i, d) = 1.0;
    }
    for (int j = 0; j < d; ++j) {
      A(k + 2 * j, j) = 1.0;
      b(k + 2 * j) = 1.0;
      A(k + 2 * j + 1, j) = -1.0;
      b(k + 2 * j + 1) = 1.0;
    }
    A(k + 2 * d, d) = 1.0;
    b(k + 2 * d) = 1.0;
    Vec c = Vec::Zero(d + 1);
    c(d) = 1.0;
    auto r = lp::maximize(A, b, c);
    if (r.optimal() && r.value > 1e-9) add(p, r.x.head(d));
  }
  return fam;
}

double angleForDelta(double delta) {
  if (!(delta > 0)) throw InvalidArgument("delta must be positive");
  double c = 1.0 - 0.5 * delta * delta;
  return c <= -1.0 ? kPi : std::acos(c);
}

ConeFamily refinedFamily2D(double maxAngle, const std::vector<Vec>& seeds) {
  if (!(maxAngle > 0.0)) throw InvalidArgument("maxAngle must be positive");
  if (maxAngle > kPi / 2 + 1e-15) throw InvalidArgument("maxAngle must be at most pi/2");
  int n0 = static_cast<int>(std::floor(kPi / maxAngle)) + 1;
  while (kPi / n0 >= maxAngle * (1.0 - 1e-9)) ++n0;  // margin for atan2 rounding
  std::vector<double> th;
  for (const auto& s : seeds) {
    if (s.size() != 2 || s.norm() <= kTau) throw InvalidArgument("seed directions must be nonzero 2-vectors");
    th.push_back(lineAngle(s));
  }
  for (int j = 0; j < n0; ++j) th.push_back(kPi * j / n0);
  // Seeds come first so a uniform line within 1e-9 of a seed is the one dropped.
  std::vector<double> kept;
  for (double a : th) {
    bool dup = false;
    for (double b : kept) {
      double g = std::abs(a - b);
      dup = dup || std::min(g, kPi - g) <= 1e-9;
    }
    if (!dup) kept.push_back(a);
  }
  std::vector<Vec> normals;
  for (double a : kept) normals.push_back(vec({-std::sin(a), std::cos(a)}));
  ConeFamily fam = buildConeFamily(normals);
  if (maxAngularWidth2D(fam) >= maxAngle) throw std::logic_error("refined family is too coarse");
  return fam;
}

double maxAngularWidth2D(const ConeFamily& fam) {
  if (fam.dim != 2) throw InvalidArgument("angular width is defined for planar families");
  std::vector<double> th;
  for (const auto& n : fam.normals) th.push_back(lineAngle(vec({-n(1), n(0)})));
  std::sort(th.begin(), th.end());
  double w = th[0] + kPi - th.back();
  for (size_t j = 1; j < th.size(); ++j) w = std::max(w, th[j] - th[j - 1]);
  return w;
}

ConeMembership coneOf(const ConeFamily& fam, const Vec& x, const Vec& y) {
  Vec v = y - x;
  if (v.norm() <= kTau) throw InvalidArgument("coneOf needs x != y");
  bool tie = false;
  std::vector<int> q = signs(fam.normals, v, &tie);
  ConeMembership m;
  m.interior = !tie;
  m.sign = q[0];
  if (m.sign < 0)
    for (int& s : q) s = -s;
  m.cone = fam.find(q);
  if (m.cone < 0) {
    // A tie produced a lower-dimensional pattern; take the first stored cone
    // agreeing on every untied coordinate.
    std::vector<double> proj(fam.normals.size());
    for (size_t i = 0; i < fam.normals.size(); ++i) proj[i] = m.sign * fam.normals[i].dot(v);
    for (int c = 0; c < fam.size() && m.cone < 0; ++c) {
      bool ok = true;
      for (size_t i = 0; i < proj.size(); ++i)
        if (std::abs(proj[i]) > kTau * v.norm() && (proj[i] > 0 ? 1 : -1) != fam.patterns[c][i]) ok = false;
      if (ok) m.cone = c;
    }
  }
  if (m.cone < 0) throw std::logic_error("cone family does not cover a direction");
  return m;
}

void ColoredPointSet::validate() const {
  const size_t n = points.size();
  if (colors < 1 || colors > 255) throw InvalidArgument("colors must be in [1, 255]");
  if (color.size() != n * n) throw InvalidArgument("coloring must cover every pair");
  if (!side.empty() && side.size() != n * n) throw InvalidArgument("side table must cover every pair");
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b) {
      int ca = c(static_cast<int>(a), static_cast<int>(b));
      if (ca != c(static_cast<int>(b), static_cast<int>(a))) throw InvalidArgument("coloring is not symmetric");
      if (ca < 1 || ca > colors) throw InvalidArgument("color out of range");
      if (!side.empty() && s(static_cast<int>(a), static_cast<int>(b)) != -s(static_cast<int>(b), static_cast<int>(a)))
        throw InvalidArgument("side table is not antisymmetric");
    }
}

ColoredPointSet ColoredPointSet::fromFunction(std::vector<Vec> points, int colors,
                                              const std::function<int(int, int)>& fn, double r, int k) {
  ColoredPointSet d;
  d.points = std::move(points);
  d.colors = colors;
  d.r = r;
  d.k = k;
  const int n = d.size();
  d.color.assign(static_cast<size_t>(n) * n, 1);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      int c = fn(a, b);
      d.color[static_cast<size_t>(a) * n + b] = static_cast<std::uint8_t>(c);
      d.color[static_cast<size_t>(b) * n + a] = static_cast<std::uint8_t>(c);
    }
  d.validate();
  return d;
}

ColoredPointSet ColoredPointSet::fromCones(std::vector<Vec> points, const ConeFamily& fam, double r, int k) {
  ColoredPointSet d;
  d.points = std::move(points);
  d.colors = fam.size();
  d.r = r;
  d.k = k;
  const int n = d.size();
  d.color.assign(static_cast<size_t>(n) * n, 1);
  d.side.assign(static_cast<size_t>(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      ConeMembership m = coneOf(fam, d.points[a], d.points[b]);
      d.color[static_cast<size_t>(a) * n + b] = d.color[static_cast<size_t>(b) * n + a] =
          static_cast<std::uint8_t>(m.cone + 1);
      d.side[static_cast<size_t>(a) * n + b] = static_cast<std::int8_t>(m.sign);
      d.side[static_cast<size_t>(b) * n + a] = static_cast<std::int8_t>(-m.sign);
    }
  return d;
}

int thinningFloor(const ColoredPointSet& data) {
  double f = static_cast<double>(data.size()) / (4.0 * (data.colors + 1));
  return std::max(data.k + 1, static_cast<int>(std::ceil(f)));
}

ThinningResult thinningHomogeneous(const ColoredPointSet& data, ThinningMode mode) {
  ThinningResult res;
  const int n = data.size();
  res.floor = thinningFloor(data);
  if (!(data.r > 0) || data.k < 0 || n < 2 * data.k * (data.colors + 1) || n == 0) {
    res.status = "infeasible-parameters";
    return res;
  }
  if (mode == ThinningMode::BothSides && !data.hasSides()) throw InvalidArgument("both-sides thinning needs a side table");
  const auto nbr = neighborLists(data);
  std::vector<int> A(n);
  for (int i = 0; i < n; ++i) A[i] = i;

  for (int color = 1; color <= data.colors; ++color) {
    std::vector<char> alive(n, 0);
    for (int x : A) alive[x] = 1;
    ThinningStage st;
    st.color = color;
    std::vector<int> B, next;
    if (mode == ThinningMode::Fixpoint) {
      std::vector<int> cnt(n, 0);
      std::deque<int> queue;
      for (int x : A) {
        for (int y : nbr[x])
          if (alive[y] && data.c(x, y) == color) ++cnt[x];
        if (cnt[x] <= data.k) queue.push_back(x);
      }
      while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (!alive[x]) continue;
        alive[x] = 0;
        st.deleted.push_back(x);
        for (int y : nbr[x])
          if (alive[y] && data.c(x, y) == color && --cnt[y] == data.k) queue.push_back(y);
      }
      for (int x : A)
        if (alive[x]) B.push_back(x);
      next = st.deleted;
      std::sort(next.begin(), next.end());
    } else {
      std::vector<int> plusIso, minusIso;
      for (int x : A) {
        int plus = 0, minus = 0;
        for (int y : nbr[x]) {
          if (!alive[y] || data.c(x, y) != color) continue;
          (data.s(x, y) > 0 ? plus : minus)++;
        }
        bool pi = plus <= data.k, mi = minus <= data.k;
        if (pi || mi) st.deleted.push_back(x);
        else B.push_back(x);
        if (pi) plusIso.push_back(x);
        if (mi) minusIso.push_back(x);
      }
      st.side = plusIso.size() >= minusIso.size() ? 1 : -1;
      next = st.side > 0 ? plusIso : minusIso;
    }
    if (static_cast<int>(B.size()) >= res.floor) {
      res.audit.push_back(st);
      res.success = true;
      res.status = "ok";
      res.B = B;
      res.color = color;
      res.reference = mode == ThinningMode::Fixpoint ? B : A;
      if (!verifyPartialHomogeneity(data, res.B, color, mode, &res.reference))
        throw std::logic_error("thinning produced a set failing its own predicate");
      return res;
    }
    st.continued = true;
    res.audit.push_back(st);
    if (static_cast<int>(next.size()) < res.floor) {
      res.status = "below-floor";
      return res;
    }
    A = next;
  }
  res.status = "exhausted";
  return res;
}

bool verifyPartialHomogeneity(const ColoredPointSet& data, const std::vector<int>& B, int color, ThinningMode mode,
                              const std::vector<int>* reference) {
  if (B.empty() || color < 1 || color > data.colors) return false;
  const std::vector<int>& ref = reference ? *reference : B;
  const int n = data.size();
  for (int x : B) {
    if (x < 0 || x >= n) return false;
    int plus = 0, minus = 0, any = 0;
    for (int y : ref) {
      if (y == x || y < 0 || y >= n) continue;
      if ((data.points[y] - data.points[x]).norm() > data.r || data.c(x, y) != color) continue;
      ++any;
      if (data.hasSides()) (data.s(x, y) > 0 ? plus : minus)++;
    }
    if (mode == ThinningMode::Fixpoint && any <= data.k) return false;
    if (mode == ThinningMode::BothSides && (!data.hasSides() || plus <= data.k || minus <= data.k)) return false;
  }
  return true;
}

}  // namespace nobeta
