#include "nobeta/game.hpp"

#include "nobeta/boundary.hpp"
#include "nobeta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nobeta {

namespace {

constexpr double kInnerFactor = 0.6;  // probe copies of scale > 1/2
constexpr double kMinLogScale = -6.907755278982137;  // log(1e-3)

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string phaseOf(const std::string& annotation) {
  auto p = annotation.find(':');
  return p == std::string::npos ? annotation : annotation.substr(0, p);
}

// Axis-aligned bounding box of a copy.
std::pair<Vec, Vec> boundingBox(const ConvexBody& P, const Homothet& q) {
  const int d = P.dim();
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = 1.0;
    hi(i) = q.center(i) + q.scale * support(P, e).value;
    lo(i) = q.center(i) - q.scale * support(P, -e).value;
  }
  return {lo, hi};
}

double maxOffset(const ConvexBody& P) {
  if (P.isBall()) return 1.0;
  double m = 0.0;
  for (const auto& f : P.facets()) m = std::max(m, f.offset);
  return m;
}

// Unit directions: 64 per dimension, circle in 2D, Fibonacci sphere otherwise.
std::vector<Vec> directionNet(int d) {
  const int n = 64 * d;
  std::vector<Vec> out;
  if (d == 2) {
    for (int k = 0; k < n; ++k) {
      double a = 2.0 * std::numbers::pi * k / n;
      out.push_back(vec({std::cos(a), std::sin(a)}));
    }
    return out;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < n; ++k) {
    double z = 1.0 - 2.0 * (k + 0.5) / n, r = std::sqrt(1.0 - z * z);
    Vec v = Vec::Zero(d);
    v(0) = r * std::cos(golden * k);
    v(1) = r * std::sin(golden * k);
    v(2) = z;
    out.push_back(v);
  }
  return out;
}

Vec boundaryPoint(const ConvexBody& P, const Homothet& q, const Vec& u) { return q.center + q.scale * u / gauge(P, u); }

// Largest copy of scale <= start containing x and legal for I. The copy is the
// image of the last I-move under a homothety centered at x, so it stays nested.
std::optional<Move> copyAround(const GameState& s, const Vec& x, double start) {
  const Homothet outer = *s.lastI();
  double t = start;
  for (int k = 0; k < 60; ++k, t *= 0.5) {
    Move m{x + (t / outer.scale) * (outer.center - x), t, ""};
    if (!s.validate(m)) return m;
  }
  return std::nullopt;
}

double relTol(double scale) { return kTau * std::min(1.0, scale); }

Move deleterMove(const GameState& s) {
  Homothet last = *s.lastI();
  if (s.survivors().empty()) return {last.center, last.scale / 2, "minimal shrink"};
  int i = s.survivors().front();
  double t = std::min(last.scale / 2, s.target().eps / 4);
  return {s.target().points[i], t, "delete " + std::to_string(i)};
}

}  // namespace

std::string playerName(Player p) { return p == Player::I ? "I" : "II"; }

std::string statusName(GameStatus s) {
  switch (s) {
    case GameStatus::Ongoing: return "ongoing";
    case GameStatus::IICertified: return "II-certified";
    case GameStatus::HorizonReached: return "horizon-reached";
    case GameStatus::Aborted: return "aborted";
  }
  return "?";
}

GameState::GameState(std::shared_ptr<const ConvexBody> body, TargetSet target)
    : body_(std::move(body)), target_(std::move(target)) {
  if (!body_) throw InvalidArgument("missing body");
  target_.validate();
  for (const auto& p : target_.points)
    if (p.size() != body_->dim()) throw InvalidArgument("target dimension differs from body dimension");
  for (int i = 0; i < static_cast<int>(target_.points.size()); ++i) survivors_.push_back(i);
  if (survivors_.empty()) {
    status_ = GameStatus::IICertified;
    certifiedRound_ = 0;
  }
}

std::optional<Homothet> GameState::lastI() const {
  if (moves_.empty()) return std::nullopt;
  size_t k = (moves_.size() - 1) / 2 * 2;
  return moves_[k].copy();
}

std::optional<Homothet> GameState::lastII() const {
  if (moves_.size() < 2) return std::nullopt;
  size_t k = moves_.size() % 2 == 0 ? moves_.size() - 1 : moves_.size() - 2;
  return moves_[k].copy();
}

std::optional<Violation> GameState::validate(const Move& m) const {
  if (status_ == GameStatus::Aborted || status_ == GameStatus::HorizonReached)
    return Violation{"game-over", "the game has ended", std::nullopt};
  if (m.center.size() != body_->dim() || !m.center.allFinite() || !std::isfinite(m.scale) || !(m.scale > 0.0))
    return Violation{"bad-move", "move needs a finite center of the body dimension and a positive scale", std::nullopt};
  Homothet q = m.copy();
  if (toMove() == Player::II) {
    double prev = lastI()->scale;
    if (!(m.scale < prev))
      return Violation{"scale-not-smaller", "II's scale " + fmt(m.scale) + " is not below " + fmt(prev), std::nullopt};
    return std::nullopt;
  }
  if (auto outer = lastI()) {
    auto c = homothetContains(*body_, *outer, q, relTol(outer->scale));
    if (!c.ok) return Violation{"not-nested", "I's move leaves the previous I-move", c.witness};
  }
  if (auto ex = lastII()) {
    auto sep = separation(*body_, q, *ex);
    if (!sep.disjoint()) return Violation{"not-disjoint", "I's move meets II's last move", sep.witness};
  }
  return std::nullopt;
}

void GameState::apply(const Move& m) {
  if (auto v = validate(m)) throw InvalidArgument("illegal move (" + v->rule + "): " + v->message);
  const Player p = toMove();
  moves_.push_back(m);
  if (p == Player::I) {
    std::vector<int> keep;
    for (int i : survivors_)
      if (containsPoint(*body_, m.copy(), target_.points[i], relTol(m.scale))) keep.push_back(i);
    survivors_ = std::move(keep);
    if (survivors_.empty() && status_ == GameStatus::Ongoing) {
      status_ = GameStatus::IICertified;
      certifiedRound_ = round();
    }
  }
}

void GameState::markHorizon() {
  if (status_ == GameStatus::Ongoing) status_ = GameStatus::HorizonReached;
}

void GameState::markAborted() { status_ = GameStatus::Aborted; }

Outcome outcome(const GameState& s) {
  return {s.status(), s.status() == GameStatus::IICertified ? s.certifiedRound() : s.round(), s.survivors()};
}

Homothet defaultOpening(const ConvexBody& P, const TargetSet& target) {
  if (target.points.empty()) return {Vec::Zero(P.dim()), 1.0};
  if (target.points.size() == 1) return {target.points[0], std::max(target.eps, 1e-3)};
  Homothet h = P.isBall() ? minEnclosingBall(target.points) : minEnclosingHomothet(P, target.points);
  h.scale = std::max(h.scale * 1.25, target.eps);
  return h;
}

std::optional<Move> safeMoveI(const GameState& s) {
  if (s.moves().empty()) return Move{defaultOpening(s.body(), s.target()).center,
                                     defaultOpening(s.body(), s.target()).scale, "opening"};
  const Homothet outer = *s.lastI();
  const auto ex = s.lastII();
  int tried = 0;
  for (int i : s.survivors()) {
    const Vec& x = s.target().points[i];
    if (ex && containsPoint(s.body(), *ex, x)) continue;
    if (auto m = copyAround(s, x, outer.scale / 4)) {
      m->annotation = "safe: keep " + std::to_string(i);
      return m;
    }
    if (++tried >= 16) break;
  }
  for (const auto& u : directionNet(s.body().dim())) {
    Vec z = boundaryPoint(s.body(), {outer.center, outer.scale * 0.999}, u);
    if (auto m = copyAround(s, z, outer.scale / 4)) {
      m->annotation = "safe: boundary";
      return m;
    }
  }
  return std::nullopt;
}

Strategy enumerateDeleter() {
  return {"enumerate", [](const GameState& s, std::uint64_t) -> std::optional<Move> {
            if (s.toMove() == Player::I) return safeMoveI(s);
            return deleterMove(s);
          }};
}

Strategy randomLegal(int maxRejections) {
  return {"random", [maxRejections](const GameState& s, std::uint64_t seed) -> std::optional<Move> {
            if (s.moves().empty()) {
              Homothet h = defaultOpening(s.body(), s.target());
              return Move{h.center, h.scale, "opening"};
            }
            CounterRng rng(seed);
            const Homothet last = *s.lastI();
            auto [lo, hi] = boundingBox(s.body(), last);
            const int d = s.body().dim();
            for (int k = 0; k < maxRejections; ++k) {
              Vec c(d);
              for (int i = 0; i < d; ++i) c(i) = rng.uniform(lo(i), hi(i));
              double t = last.scale * std::exp(rng.uniform(kMinLogScale, 0.0));
              Move m{c, t, "random"};
              if (!s.validate(m)) return m;
            }
            return std::nullopt;
          }};
}

namespace {

std::vector<int> fixpointOrAll(const DerivativeTrace& tr, int n) {
  if (tr.complete && !tr.fixpoint.empty()) return tr.fixpoint;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return all;
}

void checkTrace(const std::shared_ptr<const DerivativeTrace>& tr) {
  if (!tr) throw InvalidArgument("strategy needs a derivative trace");
}

void checkTraceFits(const DerivativeTrace& tr, const GameState& s) {
  if (tr.stageOf.size() != s.target().points.size())
    throw InvalidArgument("derivative trace does not match the target");
}

}  // namespace

Strategy goodCopyPlayer(std::shared_ptr<const DerivativeTrace> trace) {
  checkTrace(trace);
  return {"goodcopy", [trace](const GameState& s, std::uint64_t) -> std::optional<Move> {
            if (s.toMove() == Player::II) return std::nullopt;
            checkTraceFits(*trace, s);
            const ConvexBody& P = s.body();
            const bool opening = s.moves().empty();
            // The opening searches inside the default opening copy.
            const Homothet outer = opening ? defaultOpening(P, s.target()) : *s.lastI();
            const auto ex = s.lastII();
            const auto focus = fixpointOrAll(*trace, static_cast<int>(s.target().points.size()));
            TargetSet sub = s.target().subset(focus);
            DerivativeContext ctx(P, sub);
            std::vector<char> alive(s.target().points.size(), 0);
            for (int i : s.survivors()) alive[i] = 1;
            std::vector<int> cand;
            for (int k = 0; k < static_cast<int>(focus.size()); ++k) {
              int i = focus[k];
              if (!alive[i]) continue;
              if (ex && containsPoint(P, *ex, sub.points[k])) continue;
              cand.push_back(k);
            }
            // Spread a bounded sample over the candidates.
            const size_t cap = 24;
            if (cand.size() > cap) {
              std::vector<int> thin;
              for (size_t j = 0; j < cap; ++j) thin.push_back(cand[j * cand.size() / cap]);
              cand = thin;
            }
            SearchOptions opt;
            opt.tripleLimit = 8;
            opt.mustContain = cand;
            opt.preferInterior = true;
            // Replaying the last I-move is legal whenever II played elsewhere.
            if (!opening) opt.extraCopies.push_back(outer);
            // Shrinks of the last I-move toward a survivor stay nested and keep it.
            for (int k : cand)
              if (!opening)
                for (double lam : {0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2})
                opt.extraCopies.push_back({sub.points[k] + lam * (outer.center - sub.points[k]), lam * outer.scale});
            if (!cand.empty()) {
              if (auto c = goodCopySearch(ctx, Region{outer, ex}, cand, opt)) {
                return Move{c->copy.center, c->copy.scale,
                            "good copy |B|=" + std::to_string(c->limitPoints.size())};
              }
            }
            if (opening) return Move{outer.center, outer.scale, "opening"};
            // Fallback: enclosing copy of a surviving point and its nearest survivor.
            for (int a : s.survivors()) {
              const Vec& x = s.target().points[a];
              if (ex && containsPoint(P, *ex, x)) continue;
              int best = -1;
              double bd = std::numeric_limits<double>::infinity();
              for (int b : s.survivors()) {
                double dd = (s.target().points[b] - x).norm();
                if (b != a && dd < bd && !(ex && containsPoint(P, *ex, s.target().points[b]))) {
                  bd = dd;
                  best = b;
                }
              }
              if (best >= 0) {
                Homothet h = P.isBall() ? minEnclosingBall({x, s.target().points[best]})
                                        : minEnclosingHomothet(P, {x, s.target().points[best]});
                for (double f : {1.0, 0.75, 0.5}) {
                  Move m{h.center, h.scale * f, "fallback: cluster"};
                  if (m.scale > 0.0 && !s.validate(m) &&
                      (containsPoint(P, m.copy(), x) || containsPoint(P, m.copy(), s.target().points[best])))
                    return m;
                }
              }
              break;
            }
            auto m = safeMoveI(s);
            if (m) m->annotation = "fallback: " + m->annotation;
            return m;
          }};
}

int residualBound(const ConvexBody& P, const GameState& s) {
  if (P.isBall()) return 1;
  const Homothet q = *s.lastI();
  const double eps = s.target().eps;
  if (P.dim() == 2) {
    std::vector<int> perFacet(P.facets().size(), 0);
    for (int i : s.survivors()) {
      const Vec& x = s.target().points[i];
      if (std::abs(signedDistance(P, q, x)) > eps) continue;
      for (size_t f = 0; f < P.facets().size(); ++f) {
        const auto& F = P.facets()[f];
        if (std::abs(F.normal.dot(x - q.center) - q.scale * F.offset) <= eps) ++perFacet[f];
      }
    }
    std::sort(perFacet.rbegin(), perFacet.rend());
    int b = perFacet[0] + (perFacet.size() > 1 ? perFacet[1] : 0);
    return std::max(b, 1);
  }
  int band = 0;
  for (int i : s.survivors())
    if (std::abs(signedDistance(P, q, s.target().points[i])) <= eps) ++band;
  return std::max(band, 1);
}

Strategy rankReducer(std::shared_ptr<const DerivativeTrace> trace) {
  checkTrace(trace);
  return {"rank", [trace](const GameState& s, std::uint64_t) -> std::optional<Move> {
            if (s.toMove() == Player::I) return std::nullopt;
            checkTraceFits(*trace, s);
            const ConvexBody& P = s.body();
            const Homothet last = *s.lastI();
            const double rho = last.scale, eps = s.target().eps;
            if (s.survivors().empty()) return Move{last.center, rho / 2, "done: minimal shrink"};
            // Survivors the trace certifies as removable.
            std::vector<int> T;
            for (int i : s.survivors()) {
              int st = trace->stageOf[i];
              bool fix = !trace->complete ? st < 0 : st >= trace->rank;
              if (!fix) T.push_back(i);
            }
            std::string prev;
            if (s.moves().size() >= 3) prev = phaseOf(s.moves()[s.moves().size() - 2].annotation);
            auto deleteFirst = [&](const std::string& tag) {
              int i = T.front();
              return Move{s.target().points[i], std::min(rho / 2, eps / 4), tag + ": delete " + std::to_string(i)};
            };
            if (!T.empty() && (T.size() == 1 || prev == "b" || prev == "c")) return deleteFirst("c");
            int alpha = 0;
            for (int i : T) alpha = std::max(alpha, trace->stageOf[i]);
            const StageRecord& stage = trace->stages[std::min<size_t>(alpha, trace->stages.size() - 1)];
            // Strip thinner than the certified bad balls along the boundary.
            double delta = std::numeric_limits<double>::infinity();
            for (const auto& u : directionNet(P.dim())) {
              Vec z = boundaryPoint(P, last, u);
              for (const auto& b : stage.badBalls)
                if (b.ball.radius < delta && (z - b.ball.center).norm() < b.ball.radius) delta = b.ball.radius;
            }
            if (!std::isfinite(delta)) {
              for (int i : T) {
                auto it = stage.deepestBall.find(i);
                if (it != stage.deepestBall.end()) delta = std::min(delta, stage.badBalls[it->second].ball.radius);
              }
            }
            if (!std::isfinite(delta)) delta = eps;
            const double h = std::min(delta / 2, rho / 2);
            const Move strip{last.center, rho - h / maxOffset(P), ""};
            // No survivor in the strip: I has nowhere to keep a point.
            bool stripEmpty = true;
            for (int i : s.survivors())
              stripEmpty = stripEmpty && containsPoint(P, strip.copy(), s.target().points[i]);
            if (stripEmpty) return Move{strip.center, strip.scale, "a: empty strip " + fmt(h)};
            if (T.empty()) {
              // Nothing near the boundary is certified removable: play away from I's move.
              Vec c = last.center;
              c(0) += 4.0 * rho * P.diameter();
              return Move{c, rho / 2, "hold: survivors lie in the derivative fixpoint"};
            }
            if (prev != "a") return Move{strip.center, strip.scale, "a: strip " + fmt(h)};
            // Shift toward the cover of B and shrink, keeping B and the deep interior.
            TargetSet At = s.target().subset(stage.points);
            DerivativeContext ctx(P, At);
            GoodCopyCertificate cert = ctx.evaluate(last);
            std::vector<Vec> keep = cert.projected;
            for (int i : s.survivors())
              if (signedDistance(P, last, s.target().points[i]) <= -eps) keep.push_back(s.target().points[i]);
            const Vec target = cert.limitPoints.empty() ? last.center : cert.cover.center;
            std::optional<Move> best;
            int bestResidual = std::numeric_limits<int>::max();
            for (int fi = 0; fi <= 16; ++fi) {
              Vec c = last.center + (fi / 16.0) * (target - last.center);
              // Largest shrink that still holds everything to keep, by bisection on kappa.
              auto ok = [&](double kappa) {
                Homothet q{c, rho * (1 - kappa)};
                for (const auto& p : keep)
                  if (!containsPoint(P, q, p)) return false;
                return true;
              };
              double lo = 0.0, hi = 0.5;
              if (!ok(1e-9)) continue;
              lo = 1e-9;
              if (ok(hi)) lo = hi;
              for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
                double mid = 0.5 * (lo + hi);
                (ok(mid) ? lo : hi) = mid;
              }
              // Among valid shrinks prefer the one leaving the fewest survivors outside.
              Homothet q{c, rho * (1 - lo)};
              int residual = 0;
              for (int i : s.survivors())
                if (!containsPoint(P, q, s.target().points[i])) ++residual;
              if (residual < bestResidual) {
                bestResidual = residual;
                best = Move{q.center, q.scale, ""};
              }
            }
            if (!best) {
              Move m = deleterMove(s);
              m.annotation = "b: fallback " + m.annotation;
              return m;
            }
            best->annotation = "b: residual " + std::to_string(bestResidual) + " bound " +
                               std::to_string(residualBound(P, s));
            return best;
          }};
}

Strategy goodCopyPlayer(const ConvexBody& P, const TargetSet& target, int maxStages) {
  return goodCopyPlayer(std::make_shared<const DerivativeTrace>(rankTrace(P, target, maxStages)));
}

Strategy rankReducer(const ConvexBody& P, const TargetSet& target, int maxStages) {
  return rankReducer(std::make_shared<const DerivativeTrace>(rankTrace(P, target, maxStages)));
}

RunRecord playMatch(const Strategy& sI, const Strategy& sII, std::shared_ptr<const ConvexBody> body,
                    const TargetSet& target, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  GameState s(body, target);
  RunRecord rec;
  rec.pI = sI.tag;
  rec.pII = sII.tag;
  rec.seed = seed;
  rec.horizon = horizon;
  rec.bodyName = body->name();
  const Strategy fallbackII = enumerateDeleter();
  for (int r = 0; r < horizon && s.ongoing(); ++r) {
    for (Player p : {Player::I, Player::II}) {
      if (!s.ongoing()) break;
      const int idx = static_cast<int>(s.moves().size());
      const Strategy& st = p == Player::I ? sI : sII;
      MoveDiagnostic diag;
      diag.index = idx;
      diag.player = p;
      std::optional<Move> m;
      try {
        m = st.play(s, deriveSeed(seed, static_cast<std::uint64_t>(idx)));
      } catch (const std::exception& e) {
        diag.violation = std::string("strategy error: ") + e.what();
      }
      if (m) {
        if (auto v = s.validate(*m)) {
          diag.violation = v->rule;
          m.reset();
        }
      } else if (diag.violation.empty()) {
        diag.violation = "no move";
      }
      if (!m) {
        diag.forfeit = true;
        diag.fallback = true;
        m = p == Player::I ? safeMoveI(s) : fallbackII.play(s, 0);
        if (m && s.validate(*m)) m.reset();
        if (!m) {
          s.markAborted();
          rec.abortReason = "double forfeit by " + playerName(p) + " at move " + std::to_string(idx);
          rec.diagnostics.push_back(diag);
          break;
        }
        m->annotation = "forfeit fallback: " + m->annotation;
      }
      s.apply(*m);
      diag.survivorsAfter = static_cast<int>(s.survivors().size());
      rec.diagnostics.push_back(diag);
      if (p == Player::I) rec.survivorsTimeline.push_back(s.survivors());
    }
  }
  s.markHorizon();
  rec.moves = s.moves();
  rec.status = s.status();
  rec.certifiedRound = s.certifiedRound();
  rec.survivors = s.survivors();
  return rec;
}

GameState replay(std::shared_ptr<const ConvexBody> body, const TargetSet& target, const RunRecord& rec) {
  GameState s(std::move(body), target);
  for (const auto& m : rec.moves) s.apply(m);
  return s;
}

ExtractResult perfectSetExtract(const Strategy& sI, std::shared_ptr<const ConvexBody> body, const TargetSet& target,
                                int depth, std::uint64_t seed) {
  if (depth < 0 || depth > 12) throw InvalidArgument("depth must be in [0, 12]");
  ExtractResult res;
  const ConvexBody& P = *body;
  std::uint64_t probe = 0;

  // Plays I from the position given by history; returns false with the transcript on failure.
  auto askI = [&](const std::vector<Move>& history, Move& out) {
    GameState s(body, target);
    for (const auto& m : history) s.apply(m);
    std::optional<Move> m;
    try {
      m = sI.play(s, deriveSeed(seed, probe++));
    } catch (const std::exception& e) {
      res.abortReason = std::string("strategy error: ") + e.what();
      res.transcript = history;
      return false;
    }
    if (!m) {
      res.abortReason = "I forfeited";
      res.transcript = history;
      return false;
    }
    if (auto v = s.validate(*m)) {
      res.abortReason = "illegal reply (" + v->rule + "): " + v->message;
      res.transcript = history;
      res.transcript.push_back(*m);
      return false;
    }
    out = *m;
    return true;
  };
  auto abortWith = [&](const std::string& why, std::vector<Move> t) {
    res.abortReason = why;
    res.transcript = std::move(t);
    res.ok = false;
    return res;
  };

  Move root;
  if (!askI({}, root)) return res;
  res.nodes.push_back({root.copy(), -1, -1, 0, {root}});
  std::vector<int> frontier{0};
  for (int level = 0; level < depth; ++level) {
    std::vector<int> next;
    for (int id : frontier) {
      const ExtractNode node = res.nodes[id];
      const Homothet ps = node.copy;
      // Child 0: an inner copy of scale > 1/2 forces a reply of scale < 1/2.
      std::vector<Move> h0 = node.history;
      h0.push_back({ps.center, kInnerFactor * ps.scale, "probe"});
      Move c0;
      if (!askI(h0, c0)) return res;
      h0.push_back(c0);
      // Child 1: II replays child 0, then probes I's answer again.
      std::vector<Move> h1 = node.history;
      h1.push_back({c0.center, c0.scale, "replay child 0"});
      Move mid;
      if (!askI(h1, mid)) return res;
      h1.push_back(mid);
      h1.push_back({mid.center, kInnerFactor * mid.scale, "probe"});
      Move c1;
      if (!askI(h1, c1)) return res;
      h1.push_back(c1);
      if (!(c0.scale < 0.5 * ps.scale) || !(c1.scale < 0.5 * ps.scale))
        return abortWith("child scale not below half the parent", h1);
      if (!separation(P, c0.copy(), c1.copy()).disjoint()) return abortWith("children are not disjoint", h1);
      // Scaling observation: a copy in P minus (1 - e)P has scale at most e.
      const Homothet parents[2] = {ps, mid.copy()};
      const Move kids[2] = {c0, c1};
      for (int k = 0; k < 2; ++k) {
        ScaleBound sb = scaleBoundCheck(P, parents[k].relative(kids[k].copy()), 1.0 - kInnerFactor);
        if (!sb.holds || sb.delta > sb.eps + kTau) return abortWith("scale bound violated", k == 0 ? h0 : h1);
      }
      res.nodes.push_back({c0.copy(), id, 0, level + 1, h0});
      next.push_back(static_cast<int>(res.nodes.size()) - 1);
      res.nodes.push_back({c1.copy(), id, 1, level + 1, h1});
      next.push_back(static_cast<int>(res.nodes.size()) - 1);
    }
    frontier = std::move(next);
  }
  res.leaves = frontier;
  res.ok = true;
  return res;
}

}  // namespace nobeta
