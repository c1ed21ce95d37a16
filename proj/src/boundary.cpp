#include "nobeta/boundary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace nobeta {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double normalDot(const std::vector<Vec>& gens, const Vec& u) {
  bool pos = false, neg = false;
  double mn = kInf;
  for (const auto& g : gens) {
    double s = u.dot(g);
    if (s > 0) pos = true;
    if (s < 0) neg = true;
    mn = std::min(mn, std::abs(s));
  }
  return (pos && neg) ? 0.0 : mn;
}

Vec dir2(double th) { return vec({std::cos(th), std::sin(th)}); }

struct Candidate {
  Vec u;
  double bracket;
};

struct Probe {
  const ConvexBody& P;
  const Vec& x;
  double tol;
  // chordFrom measures in units of u, so directions are normalized first.
  double g(const Vec& u) const {
    Vec n = u / u.norm();
    return maxChord(P, n).length - chordFrom(P, x, n);
  }
  bool maximal(const Vec& u) const { return g(u) <= tol; }
};

DeltaResult finish(const std::vector<Vec>& gens, std::vector<Candidate>& cands, bool zeroCrossing,
                   const Vec& x) {
  DeltaResult r;
  r.point = x;
  if (cands.empty()) {
    r.found = false;
    r.value = kInf;
    r.uncertainty = kInf;
    return r;
  }
  r.value = kInf;
  for (const auto& c : cands) {
    double h = normalDot(gens, c.u / c.u.norm());
    if (h < r.value) {
      r.value = h;
      r.uncertainty = c.bracket;
      r.direction = c.u / c.u.norm();
    }
    r.maximal.push_back(c.u / c.u.norm());
  }
  if (zeroCrossing) {
    r.value = 0.0;
    r.uncertainty = 0.0;
  }
  return r;
}

DeltaResult delta2d(const ConvexBody& P, const Vec& x, const DeltaOptions& opt,
                    const std::vector<double>* gridChord) {
  std::vector<Vec> gens;
  for (const auto& h : supportingHyperplanesAt(P, x)) gens.push_back(h.normal);
  Probe pr{P, x, opt.maximalTol};
  const int N = opt.directions2d;
  const double step = 2 * kPi / N;
  std::vector<double> gv(N);
  std::vector<char> mx(N);
  for (int k = 0; k < N; ++k) {
    Vec u = dir2(k * step);
    double chord = gridChord ? (*gridChord)[k] : maxChord(P, u).length;
    gv[k] = chord - chordFrom(P, x, u);
    mx[k] = gv[k] <= opt.maximalTol;
  }
  std::vector<Candidate> cands;
  bool zero = false;
  for (int k = 0; k < N; ++k) {
    int kn = (k + 1) % N;
    double th = k * step;
    if (mx[k]) cands.push_back({dir2(th), 0.0});
    if (mx[k] && mx[kn]) {
      Vec a = dir2(th), b = dir2(th + step);
      for (const auto& g : gens) {
        if (a.dot(g) * b.dot(g) < 0) zero = true;
      }
    }
    if (mx[k] != mx[kn]) {
      double lo = mx[k] ? th : th + step;  // maximal side
      double hi = mx[k] ? th + step : th;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (pr.maximal(dir2(mid))) lo = mid; else hi = mid;
      }
      cands.push_back({dir2(lo), std::abs(hi - lo)});
    }
  }
  for (int k = 0; k < N; ++k) {
    int kp = (k + N - 1) % N, kn = (k + 1) % N;
    if (mx[k] || gv[k] > gv[kp] || gv[k] > gv[kn] || gv[k] > 0.25 * P.diameter()) continue;
    double a = (k - 1) * step, b = (k + 1) * step;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = pr.g(dir2(c)), fd = pr.g(dir2(d));
    for (int it = 0; it < 90 && b - a > 1e-15; ++it) {
      if (fc <= fd) {
        b = d; d = c; fd = fc;
        c = b - phi * (b - a);
        fc = pr.g(dir2(c));
      } else {
        a = c; c = d; fc = fd;
        d = a + phi * (b - a);
        fd = pr.g(dir2(d));
      }
    }
    double th = fc <= fd ? c : d;
    if (std::min(fc, fd) <= opt.maximalTol) cands.push_back({dir2(th), b - a});
  }
  if (!P.isBall()) {
    for (const auto& v : P.vertices()) {
      Vec u = v - x;
      if (u.norm() > 1e-12 && pr.maximal(u)) cands.push_back({u / u.norm(), 0.0});
    }
  }
  return finish(gens, cands, zero, x);
}

struct Ico {
  std::vector<Vec> v;
  std::vector<std::vector<int>> adj;
};

const Ico& icoCache(int level) {
  static std::mutex mu;
  static std::map<int, Ico> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(level);
  if (it != cache.end()) return it->second;
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> V = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                                    {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                                    {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : V) p.normalize();
  std::vector<std::array<int, 3>> F = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                       {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                       {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                       {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto f = mid.find(key);
      if (f != mid.end()) return f->second;
      V.push_back((V[a] + V[b]).normalized());
      int id = static_cast<int>(V.size()) - 1;
      mid[key] = id;
      return id;
    };
    std::vector<std::array<int, 3>> G;
    for (auto& f : F) {
      int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      G.push_back({f[0], a, c});
      G.push_back({f[1], b, a});
      G.push_back({f[2], c, b});
      G.push_back({a, b, c});
    }
    F = G;
  }
  Ico ico;
  for (auto& p : V) ico.v.push_back(Vec(p));
  ico.adj.assign(V.size(), {});
  for (auto& f : F) {
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      if (std::find(ico.adj[a].begin(), ico.adj[a].end(), b) == ico.adj[a].end()) {
        ico.adj[a].push_back(b);
        ico.adj[b].push_back(a);
      }
    }
  }
  return cache.emplace(level, std::move(ico)).first->second;
}

Vec slerp(const Vec& a, const Vec& b, double s) { return ((1 - s) * a + s * b).normalized(); }

DeltaResult delta3d(const ConvexBody& P, const Vec& x, const DeltaOptions& opt,
                    const std::vector<double>* gridChord) {
  std::vector<Vec> gens;
  for (const auto& h : supportingHyperplanesAt(P, x)) gens.push_back(h.normal);
  Probe pr{P, x, opt.maximalTol};
  const Ico& ico = icoCache(opt.icosphereLevel);
  const int N = static_cast<int>(ico.v.size());
  std::vector<double> gv(N);
  std::vector<char> mx(N);
  for (int k = 0; k < N; ++k) {
    double chord = gridChord ? (*gridChord)[k] : maxChord(P, ico.v[k]).length;
    gv[k] = chord - chordFrom(P, x, ico.v[k]);
    mx[k] = gv[k] <= opt.maximalTol;
  }
  std::vector<Candidate> cands;
  bool zero = false;
  for (int k = 0; k < N; ++k) {
    if (!mx[k]) continue;
    cands.push_back({ico.v[k], 0.0});
    if (normalDot(gens, ico.v[k]) == 0.0) zero = true;
    for (int j : ico.adj[k]) {
      if (mx[j]) {
        for (const auto& g : gens)
          if (ico.v[k].dot(g) * ico.v[j].dot(g) < 0) zero = true;
        continue;
      }
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 50; ++it) {
        double mid = 0.5 * (lo + hi);
        if (pr.maximal(slerp(ico.v[k], ico.v[j], mid))) lo = mid; else hi = mid;
      }
      double ang = std::acos(std::clamp(ico.v[k].dot(ico.v[j]), -1.0, 1.0));
      cands.push_back({slerp(ico.v[k], ico.v[j], lo), (hi - lo) * ang});
    }
  }
  // Pattern search from local minima of g that are not yet maximal.
  std::vector<int> minima;
  for (int k = 0; k < N; ++k) {
    if (mx[k] || gv[k] > 0.25 * P.diameter()) continue;
    bool isMin = true;
    for (int j : ico.adj[k]) isMin = isMin && gv[k] <= gv[j];
    if (isMin) minima.push_back(k);
  }
  for (int k : minima) {
    Vec u = ico.v[k];
    double fu = gv[k];
    Vec e1 = u.unitOrthogonal();
    Vec e2 = Eigen::Vector3d(u.head<3>()).cross(Eigen::Vector3d(e1.head<3>()));
    double stepLen = 0.05;
    for (int it = 0; it < 400 && stepLen > 1e-11; ++it) {
      bool moved = false;
      for (const Vec& e : {e1, e2, Vec(-e1), Vec(-e2)}) {
        Vec c = (u + stepLen * e).normalized();
        double fc = pr.g(c);
        if (fc < fu) {
          u = c;
          fu = fc;
          moved = true;
          break;
        }
      }
      if (!moved) stepLen *= 0.5;
      e1 = (e1 - e1.dot(u) * u).normalized();
      e2 = Eigen::Vector3d(u.head<3>()).cross(Eigen::Vector3d(e1.head<3>()));
    }
    if (fu <= opt.maximalTol) cands.push_back({u, 2 * stepLen});
  }
  if (!P.isBall()) {
    for (const auto& v : P.vertices()) {
      Vec u = v - x;
      if (u.norm() > 1e-12 && pr.maximal(u)) cands.push_back({u / u.norm(), 0.0});
    }
  }
  return finish(gens, cands, zero, x);
}

std::vector<double> gridChords(const ConvexBody& P, const DeltaOptions& opt) {
  std::vector<double> out;
  if (P.dim() == 2) {
    const int N = opt.directions2d;
    for (int k = 0; k < N; ++k) out.push_back(maxChord(P, dir2(2 * kPi * k / N)).length);
  } else {
    for (const auto& u : icoCache(opt.icosphereLevel).v) out.push_back(maxChord(P, u).length);
  }
  return out;
}

DeltaResult deltaAtCached(const ConvexBody& P, const Vec& x, const DeltaOptions& opt,
                          const std::vector<double>* grid) {
  if (P.dim() == 2) return delta2d(P, x, opt, grid);
  if (P.dim() == 3) return delta3d(P, x, opt, grid);
  throw InvalidArgument("delta is implemented for dimension 2 and 3");
}

}  // namespace

std::vector<Vec> icosphere(int level) { return icoCache(level).v; }

DeltaResult deltaAt(const ConvexBody& P, const Vec& x, const DeltaOptions& opt) {
  return deltaAtCached(P, x, opt, nullptr);
}

std::vector<Vec> boundarySamples(const ConvexBody& P) {
  std::vector<Vec> out;
  if (P.isBall()) {
    if (P.dim() == 2) {
      for (int k = 0; k < 64; ++k) out.push_back(dir2(2 * kPi * k / 64));
    } else if (P.dim() == 3) {
      out = icoCache(1).v;
    } else {
      for (int i = 0; i < P.dim(); ++i) {
        out.push_back(Vec::Unit(P.dim(), i));
        out.push_back(-Vec::Unit(P.dim(), i));
      }
    }
    return out;
  }
  const auto& V = P.vertices();
  if (P.dim() == 2) {
    const int n = static_cast<int>(V.size());
    std::vector<double> params;
    if (P.kind() == BodyKind::Polytope) {
      for (int k = 1; k < 8; ++k) params.push_back(k / 8.0);
      for (int k = 4; k <= 24; ++k) {
        params.push_back(std::ldexp(1.0, -k));
        params.push_back(1.0 - std::ldexp(1.0, -k));
      }
    } else {
      params.push_back(0.5);
    }
    for (int i = 0; i < n; ++i) {
      out.push_back(V[i]);
      for (double s : params) out.push_back((1 - s) * V[i] + s * V[(i + 1) % n]);
    }
    return out;
  }
  out = V;
  const auto& FV = P.facetVertices();
  for (const auto& on : FV) {
    Vec c = Vec::Zero(3);
    for (int i : on) c += V[i];
    out.push_back(c / static_cast<double>(on.size()));
  }
  for (size_t a = 0; a < V.size(); ++a) {
    for (size_t b = a + 1; b < V.size(); ++b) {
      int shared = 0;
      for (const auto& on : FV) {
        bool ha = std::find(on.begin(), on.end(), static_cast<int>(a)) != on.end();
        bool hb = std::find(on.begin(), on.end(), static_cast<int>(b)) != on.end();
        if (ha && hb) ++shared;
      }
      if (shared >= 2) out.push_back(0.5 * (V[a] + V[b]));
    }
  }
  return out;
}

DeltaResult deltaGlobal(const ConvexBody& P, const DeltaOptions& opt) {
  auto grid = gridChords(P, opt);
  DeltaResult best;
  best.value = kInf;
  for (const auto& x : boundarySamples(P)) {
    DeltaResult r = deltaAtCached(P, x, opt, &grid);
    if (!r.found) continue;
    if (r.value < best.value) best = r;
  }
  return best;
}

Tangents tangents2D(const ConvexBody& P, const Vec& x) {
  if (P.dim() != 2) throw InvalidArgument("tangents2D needs a planar body");
  Homothet unit{Vec::Zero(2), 1.0};
  if (std::abs(signedDistance(P, unit, x)) > 1e-8)
    throw PreconditionViolation("point is not on the boundary", x);
  if (P.isBall()) {
    Vec r = vec({-x(1), x(0)}) / x.norm();
    return {Vec(-r), r};
  }
  const auto& V = P.vertices();
  const int n = static_cast<int>(V.size());
  for (int i = 0; i < n; ++i) {
    if ((V[i] - x).norm() <= 1e-9) {
      return {(V[(i + n - 1) % n] - V[i]).normalized(), (V[(i + 1) % n] - V[i]).normalized()};
    }
  }
  const auto& F = P.facets();
  for (int i = 0; i < n; ++i) {
    if (std::abs(F[i].normal.dot(x) - F[i].offset) <= 1e-8) {
      Vec r = (V[(i + 1) % n] - V[i]).normalized();
      return {Vec(-r), r};
    }
  }
  throw PreconditionViolation("point is not on the boundary", x);
}

Exceptional exceptionalPoints2D(const ConvexBody& P, const DeltaOptions& opt) {
  if (P.dim() != 2) throw InvalidArgument("exceptionalPoints2D needs a planar body");
  Exceptional ex;
  std::vector<char> edgeMax;
  if (!P.isBall()) {
    const auto& V = P.vertices();
    const int n = static_cast<int>(V.size());
    edgeMax.assign(n, 0);
    std::vector<char> inF(n, 0);
    for (int i = 0; i < n; ++i) {
      Vec e = V[(i + 1) % n] - V[i];
      if (e.norm() >= maxChord(P, e).length - opt.maximalTol) {
        edgeMax[i] = 1;
        inF[i] = inF[(i + 1) % n] = 1;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!inF[i]) continue;
      ex.F.push_back(V[i]);
      Tangents t = tangents2D(P, V[i]);
      ex.tangentDirections.push_back(t.left);
      ex.tangentDirections.push_back(t.right);
      bool rightMax = edgeMax[i], leftMax = edgeMax[(i + n - 1) % n];
      if (rightMax == leftMax) continue;
      // Normal of the non-maximal tangent line at V[i].
      const Vec& N = rightMax ? P.facets()[(i + n - 1) % n].normal : P.facets()[i].normal;
      DeltaResult r = deltaAt(P, V[i], opt);
      double eta = kInf;
      for (const auto& u : r.maximal) eta = std::min(eta, std::abs(u.dot(N)));
      if (!ex.eta || eta < *ex.eta) ex.eta = eta;
    }
  }
  auto grid = gridChords(P, opt);
  ex.delta = kInf;
  for (const auto& x : boundarySamples(P)) {
    bool skip = false;
    for (const auto& f : ex.F) skip = skip || (f - x).norm() <= 1e-12;
    if (skip) continue;
    DeltaResult r = deltaAtCached(P, x, opt, &grid);
    if (r.found) ex.delta = std::min(ex.delta, r.value - r.uncertainty);
  }
  return ex;
}

ScaleBound scaleBoundCheck(const ConvexBody& P, const Homothet& q, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("eps must lie in (0, 1]");
  if (q.scale <= 0.0) throw InvalidArgument("copy must have positive scale");
  Homothet unit{Vec::Zero(P.dim()), 1.0};
  Containment c = homothetContains(P, unit, q);
  if (!c.ok) throw PreconditionViolation("copy is not contained in P (facet " +
                                         std::to_string(c.facet) + ")", c.witness);
  GaugeMin gm = minGaugeOver(P, q);
  if (gm.value < 1.0 - eps - kTau)
    throw PreconditionViolation("copy meets the interior of (1-eps)P", gm.point);
  ScaleBound sb;
  sb.delta = q.scale;
  sb.eps = eps;
  Vec u = q.center;
  if (u.norm() <= kTau) u = Vec::Unit(P.dim(), 0);
  u.normalize();
  sb.lineDir = u;
  Vec zero = Vec::Zero(P.dim());
  sb.chordP = chordFrom(P, zero, u) + chordFrom(P, zero, -u);
  sb.chordInner = (1.0 - eps) * sb.chordP;
  sb.chordQ = q.scale * sb.chordP;
  sb.holds = q.scale <= eps + kTau;
  return sb;
}

std::string contactKindName(Contact::Kind k) {
  switch (k) {
    case Contact::Kind::Empty: return "empty";
    case Contact::Kind::SinglePoint: return "single-point";
    case Contact::Kind::SupportingSegments: return "supporting-segments";
    case Contact::Kind::FacetSet: return "facet-set";
  }
  return "?";
}

Contact homothetBoundaryContact(const ConvexBody& P, const Homothet& p, const Homothet& q) {
  Containment c = homothetContains(P, p, q);
  if (!c.ok) throw PreconditionViolation("inner copy is not contained in the outer copy", c.witness);
  if (!(q.scale < p.scale)) throw PreconditionViolation("inner copy must be strictly smaller");
  Contact out;
  const double tol = 1e-9;
  if (P.isBall()) {
    Vec d = q.center - p.center;
    double dist = d.norm();
    if (dist > 0 && dist + q.scale >= p.scale - tol) {
      out.kind = Contact::Kind::SinglePoint;
      out.points.push_back(p.center + p.scale * d / dist);
    }
    return out;
  }
  const auto& F = P.facets();
  const auto& FV = P.facetVertices();
  const auto& V = P.vertices();
  for (int j = 0; j < static_cast<int>(F.size()); ++j) {
    double hq = F[j].normal.dot(q.center) + q.scale * F[j].offset;
    double hp = F[j].normal.dot(p.center) + p.scale * F[j].offset;
    if (hq >= hp - tol) out.facets.push_back(j);
  }
  if (out.facets.empty()) return out;
  if (P.dim() == 2) {
    out.kind = Contact::Kind::SupportingSegments;
    for (int j : out.facets) out.segments.push_back({q.apply(V[FV[j][0]]), q.apply(V[FV[j][1]])});
  } else {
    out.kind = Contact::Kind::FacetSet;
    for (int j : out.facets)
      for (int v : FV[j]) out.points.push_back(q.apply(V[v]));
  }
  return out;
}

}  // namespace nobeta
