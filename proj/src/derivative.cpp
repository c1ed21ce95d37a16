#include "nobeta/derivative.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

namespace nobeta {

namespace {

constexpr double kFacetTol = 1e-9;
constexpr double kFactors[3] = {1.0, 0.75, 0.5};

std::vector<int> activeFacets(const ConvexBody& P, const Vec& z) {
  std::vector<int> out;
  const auto& F = P.facets();
  for (int i = 0; i < static_cast<int>(F.size()); ++i) {
    if (std::abs(F[i].normal.dot(z) - F[i].offset) <= kFacetTol) out.push_back(i);
  }
  return out;
}

Homothet enclose(const ConvexBody& P, const std::vector<Vec>& pts) {
  if (P.isBall()) return minEnclosingBall(pts);
  return minEnclosingHomothet(P, pts);
}

// Candidate copies built from pairs (farthest first) and, for small sets, triples.
class CopyGenerator {
 public:
  CopyGenerator(const ConvexBody& P, const std::vector<Vec>& pts) : P_(P), pts_(pts) {}

  // Calls visit(copy, key) for each candidate until visit returns false.
  template <class F>
  void forEach(const std::vector<int>& idx, int tripleLimit, F&& visit) {
    const int n = static_cast<int>(idx.size());
    std::vector<std::pair<double, std::pair<int, int>>> pairs;
    pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        pairs.push_back({-(pts_[idx[a]] - pts_[idx[b]]).squaredNorm(), {idx[a], idx[b]}});
    std::sort(pairs.begin(), pairs.end());
    for (const auto& pr : pairs) {
      int i = std::min(pr.second.first, pr.second.second), j = std::max(pr.second.first, pr.second.second);
      const Homothet& base = cached({i, j, -1});
      for (int f = 0; f < 3; ++f) {
        if (!visit(Homothet{base.center, base.scale * kFactors[f]}, Key{i, j, -1, f})) return;
      }
    }
    if (n > tripleLimit) return;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) {
          std::array<int, 3> t{idx[a], idx[b], idx[c]};
          std::sort(t.begin(), t.end());
          const Homothet& base = cached({t[0], t[1], t[2]});
          for (int f = 0; f < 3; ++f) {
            if (!visit(Homothet{base.center, base.scale * kFactors[f]}, Key{t[0], t[1], t[2], f})) return;
          }
        }
  }

  struct Key {
    int i, j, k, f;
    bool operator<(const Key& o) const { return std::tie(i, j, k, f) < std::tie(o.i, o.j, o.k, o.f); }
  };

 private:
  const Homothet& cached(std::array<int, 3> k) {
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    std::vector<Vec> pts{pts_[k[0]], pts_[k[1]]};
    if (k[2] >= 0) pts.push_back(pts_[k[2]]);
    return cache_.emplace(k, enclose(P_, pts)).first->second;
  }

  const ConvexBody& P_;
  const std::vector<Vec>& pts_;
  std::map<std::array<int, 3>, Homothet> cache_;
};

}  // namespace

DerivativeContext::DerivativeContext(const ConvexBody& P, const TargetSet& target, double eta)
    : P_(&P), T_(&target), eta_(eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  if (!(target.eps > 0.0)) throw InvalidArgument("eps must be positive");
  const auto& X = target.points;
  const int n = static_cast<int>(X.size());
  nbr_.assign(n, {});
  // Sort along the first coordinate and scan a window of width eps.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return X[a](0) < X[b](0); });
  const double e2 = target.eps * target.eps;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      int i = order[a], j = order[b];
      if (X[j](0) - X[i](0) > target.eps) break;
      if ((X[i] - X[j]).squaredNorm() <= e2) {
        nbr_[i].push_back(j);
        nbr_[j].push_back(i);
      }
    }
  }
  for (auto& v : nbr_) std::sort(v.begin(), v.end());
}

GoodCopyCertificate DerivativeContext::evaluate(const Homothet& q) const {
  const ConvexBody& P = *P_;
  const auto& X = T_->points;
  const double eps = T_->eps;
  if (!(q.scale > 0.0)) throw InvalidArgument("copy scale must be positive");
  if (q.center.size() != P.dim()) throw InvalidArgument("copy dimension mismatch");
  const int n = static_cast<int>(X.size());
  GoodCopyCertificate c;
  c.copy = q;
  std::vector<double> sd(n);
  std::vector<char> inBand(n, 0);
  for (int i = 0; i < n; ++i) {
    sd[i] = signedDistance(P, q, X[i]);
    if (std::abs(sd[i]) <= eps) {
      inBand[i] = 1;
      c.band.push_back(i);
    }
    if (sd[i] < -kTau) ++c.insideCount;
  }
  std::unordered_map<int, Vec> proj;
  auto projOf = [&](int i) -> const Vec& {
    auto it = proj.find(i);
    if (it == proj.end()) it = proj.emplace(i, radialProject(P, q, X[i])).first;
    return it->second;
  };
  for (int x : c.band) {
    bool admitted = false;
    for (int y : nbr_[x]) {
      if (sd[y] <= -eps) {
        admitted = true;
        break;
      }
    }
    if (!admitted) {
      // Supporting hyperplanes of q at the boundary point of x.
      const Vec& px = projOf(x);
      std::vector<Vec> normals;
      if (P.isBall()) {
        normals.push_back((px - q.center).normalized());
      } else {
        for (int f : activeFacets(P, (px - q.center) / q.scale)) normals.push_back(P.facets()[f].normal);
      }
      for (int y : nbr_[x]) {
        if (!inBand[y]) continue;
        for (const auto& nv : normals) {
          if (std::abs(nv.dot(X[y] - px)) <= eps) {
            admitted = true;
            c.hyperplaneWitnesses.push_back({x, y});
            break;
          }
        }
        if (admitted) break;
      }
    }
    if (admitted) {
      c.limitPoints.push_back(x);
      c.projected.push_back(projOf(x));
    }
  }
  if (c.projected.size() >= 2) {
    c.cover = enclose(P, c.projected);
    c.coverScale = c.cover.scale;
  } else if (c.projected.size() == 1) {
    c.cover = {c.projected[0], 0.0};
  } else {
    c.cover = {q.center, 0.0};
  }
  c.good = !c.limitPoints.empty() && c.coverScale > (1.0 - eta_) * q.scale;
  return c;
}

GoodCopyCertificate isGoodCopy(const ConvexBody& P, const Homothet& q, const TargetSet& target, double eta) {
  target.validate();
  DerivativeContext ctx(P, target, eta);
  return ctx.evaluate(q);
}

bool copyInsideBall(const ConvexBody& P, const Homothet& q, const Vec& center, double radius) {
  if (P.isBall()) return (q.center - center).norm() + q.scale < radius;
  for (const auto& v : P.vertices()) {
    if ((q.apply(v) - center).norm() >= radius) return false;
  }
  return true;
}

bool copyInRegion(const ConvexBody& P, const Homothet& q, const Region& region) {
  if (!homothetContains(P, region.outer, q).ok) return false;
  if (region.excluded && !separation(P, q, *region.excluded).disjoint()) return false;
  return true;
}

std::vector<double> dyadicRadii(double eps, double diameter) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  std::vector<double> r{eps};
  while (r.back() < diameter) r.push_back(r.back() * 2.0);
  return r;
}

StepResult derivativeStep(const ConvexBody& P, const TargetSet& target, const StepOptions& opt) {
  StepResult res;
  const auto& X = target.points;
  const int n = static_cast<int>(X.size());
  if (n == 0) return res;
  target.validate();
  DerivativeContext ctx(P, target, opt.eta);

  const bool ownFamily = !opt.family.has_value();
  const std::vector<Vec>& F = ownFamily ? X : *opt.family;
  const int m = static_cast<int>(F.size());
  for (const auto& f : F)
    if (f.size() != P.dim()) throw InvalidArgument("family dimension mismatch");
  double famDiam = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) famDiam = std::max(famDiam, (F[i] - F[j]).norm());
  const std::vector<double> radii = dyadicRadii(target.eps, famDiam);

  CopyGenerator gen(P, F);
  std::map<CopyGenerator::Key, bool> verdict;
  // Member sets already shown good, with the copies that worked.
  std::map<std::vector<int>, std::vector<Homothet>> goodBySet;

  std::vector<char> removed(n, 0);
  std::vector<double> depth(n, -1.0);
  int ballId = 0;
  for (int ci = 0; ci < m; ++ci) {
    for (double r : radii) {
      CandidateBall ball{ballId++, F[ci], r, {}};
      for (int i = 0; i < n; ++i)
        if ((X[i] - ball.center).norm() < r) ball.members.push_back(i);
      if (ball.members.empty()) continue;
      ++res.ballsExamined;
      BadBall bad{ball, {}, false};
      bool isBad = false;
      if (ball.members.size() < 2) {
        bad.tooFew = true;
        isBad = true;
      } else {
        bool good = false;
        auto known = goodBySet.find(ball.members);
        if (known != goodBySet.end()) {
          for (const auto& q : known->second)
            if (copyInsideBall(P, q, ball.center, r)) {
              good = true;
              break;
            }
        }
        if (!good) {
          std::vector<int> fam;
          for (int j = 0; j < m; ++j)
            if ((F[j] - ball.center).norm() < r) fam.push_back(j);
          long tested = 0;
          bool truncated = false;
          gen.forEach(fam, opt.tripleLimit, [&](const Homothet& q, const CopyGenerator::Key& key) {
            if (q.scale <= 0.0 || !copyInsideBall(P, q, ball.center, r)) return true;
            if (tested >= opt.maxCopiesPerBall) {
              truncated = true;
              return false;
            }
            ++tested;
            auto it = verdict.find(key);
            bool g;
            if (it != verdict.end()) {
              g = it->second;
            } else {
              g = ctx.evaluate(q).good;
              verdict[key] = g;
              ++res.copiesTested;
            }
            if (g) {
              good = true;
              goodBySet[ball.members].push_back(q);
              return false;
            }
            bad.refuted.push_back(q);
            return true;
          });
          if (!good && truncated) {
            ++res.inconclusiveBalls;
            continue;
          }
        }
        isBad = !good;
      }
      if (!isBad) continue;
      const int bi = static_cast<int>(res.badBalls.size());
      for (int i : ball.members) {
        if (!removed[i]) {
          removed[i] = 1;
          res.removedBy[i] = bi;
        }
        double dep = r - (X[i] - ball.center).norm();
        if (dep > depth[i]) {
          depth[i] = dep;
          res.deepestBall[i] = bi;
        }
      }
      res.badBalls.push_back(std::move(bad));
    }
  }
  for (int i = 0; i < n; ++i) (removed[i] ? res.removed : res.kept).push_back(i);
  return res;
}

const std::vector<int>& DerivativeTrace::stagePoints(int s) const {
  if (stages.empty()) throw InvalidArgument("empty trace");
  s = std::clamp(s, 0, static_cast<int>(stages.size()) - 1);
  return stages[s].points;
}

DerivativeTrace rankTrace(const ConvexBody& P, const TargetSet& target, int maxStages, const StepOptions& opt) {
  if (maxStages < 1) throw InvalidArgument("maxStages must be at least 1");
  target.validate();
  DerivativeTrace tr;
  const int n = static_cast<int>(target.points.size());
  tr.stageOf.assign(n, -1);
  std::vector<int> cur(n);
  for (int i = 0; i < n; ++i) cur[i] = i;
  for (int s = 0; s < maxStages; ++s) {
    TargetSet sub = target.subset(cur);
    StepResult st = derivativeStep(P, sub, opt);
    StageRecord rec;
    rec.points = cur;
    rec.ballsExamined = st.ballsExamined;
    rec.inconclusiveBalls = st.inconclusiveBalls;
    rec.copiesTested = st.copiesTested;
    for (int i : st.removed) rec.removed.push_back(cur[i]);
    for (auto [i, b] : st.removedBy) rec.removedBy[cur[i]] = b;
    for (auto [i, b] : st.deepestBall) rec.deepestBall[cur[i]] = b;
    for (auto& b : st.badBalls) {
      for (int& i : b.ball.members) i = cur[i];
      rec.badBalls.push_back(std::move(b));
    }
    for (int g : rec.removed) tr.stageOf[g] = s;
    std::vector<int> next;
    for (int i : st.kept) next.push_back(cur[i]);
    tr.stages.push_back(std::move(rec));
    if (st.removed.empty()) {
      tr.rank = s;
      tr.complete = true;
      tr.fixpoint = cur;
      for (int g : cur) tr.stageOf[g] = s;
      return tr;
    }
    cur = std::move(next);
    if (cur.empty()) {
      // The empty set is its own derivative.
      StageRecord empty;
      tr.stages.push_back(std::move(empty));
      tr.rank = s + 1;
      tr.complete = true;
      return tr;
    }
  }
  // Cap reached: record the last set as a stage without a step.
  StageRecord last;
  last.points = cur;
  tr.stages.push_back(std::move(last));
  return tr;
}

std::optional<GoodCopyCertificate> goodCopySearch(const DerivativeContext& ctx, const Region& region,
                                                  const std::vector<int>& candidates, const SearchOptions& opt) {
  const ConvexBody& P = ctx.body();
  CopyGenerator gen(P, ctx.target().points);
  std::optional<GoodCopyCertificate> best;
  long tested = 0;
  auto better = [&](const GoodCopyCertificate& a, const GoodCopyCertificate& b) {
    if (opt.preferInterior)
      return std::make_tuple(a.insideCount, a.limitPoints.size(), a.copy.scale) >
             std::make_tuple(b.insideCount, b.limitPoints.size(), b.copy.scale);
    return std::make_tuple(a.limitPoints.size(), a.insideCount, a.copy.scale) >
           std::make_tuple(b.limitPoints.size(), b.insideCount, b.copy.scale);
  };
  auto consider = [&](const Homothet& q) {
    if (q.scale <= 0.0 || !copyInRegion(P, q, region)) return true;
    if (!opt.mustContain.empty()) {
      bool any = false;
      for (int i : opt.mustContain) {
        if (containsPoint(P, q, ctx.target().points[i])) {
          any = true;
          break;
        }
      }
      if (!any) return true;
    }
    if (++tested > opt.maxCopies) return false;
    GoodCopyCertificate c = ctx.evaluate(q);
    if (c.good && (!best || better(c, *best))) best = std::move(c);
    return true;
  };
  for (const auto& q : opt.extraCopies)
    if (!consider(q)) return best;
  gen.forEach(candidates, opt.tripleLimit, [&](const Homothet& q, const CopyGenerator::Key&) { return consider(q); });
  return best;
}

std::optional<GoodCopyCertificate> goodCopySearch(const ConvexBody& P, const Region& region, const TargetSet& target,
                                                  double eta) {
  target.validate();
  DerivativeContext ctx(P, target, eta);
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(target.points.size()); ++i)
    if (containsPoint(P, region.outer, target.points[i])) idx.push_back(i);
  SearchOptions opt;
  opt.eta = eta;
  return goodCopySearch(ctx, region, idx, opt);
}

}  // namespace nobeta
