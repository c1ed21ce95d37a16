#include "nobeta/io.hpp"

#include <set>

namespace nobeta::io {

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, size_t i) { return ptr + "/" + std::to_string(i); }

void requireObject(const Json& j, const std::string& ptr, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw JsonError(ptr.empty() ? "/" : ptr, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw JsonError(child(ptr, k), "unknown field");
}

const Json& field(const Json& j, const std::string& ptr, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw JsonError(child(ptr, key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& ptr) {
  if (!j.is_number()) throw JsonError(ptr, "expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw JsonError(ptr, "expected an integer");
  return j.get<long long>();
}

std::string text(const Json& j, const std::string& ptr) {
  if (!j.is_string()) throw JsonError(ptr, "expected a string");
  return j.get<std::string>();
}

bool boolean(const Json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw JsonError(ptr, "expected a boolean");
  return j.get<bool>();
}

std::vector<int> intList(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw JsonError(ptr, "expected an array");
  std::vector<int> out;
  for (size_t i = 0; i < j.size(); ++i) out.push_back(static_cast<int>(integer(j[i], child(ptr, i))));
  return out;
}

GameStatus statusFromName(const std::string& s, const std::string& ptr) {
  for (GameStatus g : {GameStatus::Ongoing, GameStatus::IICertified, GameStatus::HorizonReached, GameStatus::Aborted})
    if (statusName(g) == s) return g;
  throw JsonError(ptr, "unknown status '" + s + "'");
}

Player playerFromName(const std::string& s, const std::string& ptr) {
  if (s == "I") return Player::I;
  if (s == "II") return Player::II;
  throw JsonError(ptr, "unknown player '" + s + "'");
}

// Rethrows constructor failures with the pointer of the field that fed them.
template <typename F>
auto at(const std::string& ptr, F&& f) {
  try {
    return f();
  } catch (const JsonError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw JsonError(ptr.empty() ? "/" : ptr, e.what());
  } catch (const PreconditionViolation& e) {
    throw JsonError(ptr.empty() ? "/" : ptr, e.what());
  }
}

Json pairs(const std::map<int, int>& m) {
  Json a = Json::array();
  for (const auto& [k, v] : m) a.push_back({k, v});
  return a;
}

}  // namespace

Json parse(const std::string& s) {
  try {
    return Json::parse(s);
  } catch (const Json::parse_error& e) {
    throw JsonError("/", "malformed JSON at byte " + std::to_string(e.byte));
  }
}

std::string dump(const Json& j) { return j.dump() + "\n"; }

Json toJson(const Vec& v) { return toStd(v); }

Vec vecFromJson(const Json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty()) throw JsonError(ptr.empty() ? "/" : ptr, "expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], child(ptr, i));
  return v;
}

Json toJson(const std::vector<Vec>& pts) {
  Json a = Json::array();
  for (const Vec& p : pts) a.push_back(toJson(p));
  return a;
}

std::vector<Vec> pointsFromJson(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw JsonError(ptr.empty() ? "/" : ptr, "expected an array of points");
  std::vector<Vec> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(vecFromJson(j[i], child(ptr, i)));
    if (out.back().size() != out.front().size()) throw JsonError(child(ptr, i), "dimension mismatch");
  }
  return out;
}

Json toJson(const ConvexBody& P) {
  Json j = {{"kind", kindName(P.kind())}, {"dim", P.dim()}, {"name", P.name()}};
  if (P.kind() == BodyKind::Polytope) j["vertices"] = toJson(P.vertices());
  if (P.kind() == BodyKind::Smooth2d) j["samples"] = toJson(P.samples());
  return j;
}

ConvexBody bodyFromJson(const Json& j) {
  requireObject(j, "", {"kind", "dim", "vertices", "samples", "name"});
  std::string kind = text(field(j, "", "kind"), "/kind");
  int dim = static_cast<int>(integer(field(j, "", "dim"), "/dim"));
  std::string name = j.contains("name") ? text(j["name"], "/name") : kind;
  if (kind == "ball") {
    return at("/dim", [&] { return ConvexBody::ball(dim, name); });
  }
  if (kind == "polytope") {
    auto pts = pointsFromJson(field(j, "", "vertices"), "/vertices");
    if (!pts.empty() && pts[0].size() != dim) throw JsonError("/dim", "does not match the vertices");
    return at("/vertices", [&] { return ConvexBody::polytope(pts, name); });
  }
  if (kind == "smooth2d") {
    auto pts = pointsFromJson(field(j, "", "samples"), "/samples");
    if (dim != 2) throw JsonError("/dim", "smooth2d bodies are planar");
    return at("/samples", [&] { return ConvexBody::smooth2d(pts, name); });
  }
  throw JsonError("/kind", "unknown kind '" + kind + "'");
}

Json toJson(const TargetSet& t) {
  return {{"points", toJson(t.points)}, {"eps", t.eps}, {"generator", t.generator}, {"dim", t.dim}};
}

TargetSet targetFromJson(const Json& j) {
  requireObject(j, "", {"points", "eps", "generator", "dim"});
  TargetSet t;
  t.points = pointsFromJson(field(j, "", "points"), "/points");
  t.eps = number(field(j, "", "eps"), "/eps");
  if (!(t.eps > 0)) throw JsonError("/eps", "must be positive");
  t.generator = j.contains("generator") ? text(j["generator"], "/generator") : "file";
  if (j.contains("dim")) {
    t.dim = static_cast<int>(integer(j["dim"], "/dim"));
    if (!t.points.empty() && t.points[0].size() != t.dim) throw JsonError("/dim", "does not match the points");
  } else if (!t.points.empty()) {
    t.dim = static_cast<int>(t.points[0].size());
  }
  at("/points", [&] {
    t.validate();
    return 0;
  });
  return t;
}

Json toJson(const Homothet& h) { return {{"center", toJson(h.center)}, {"scale", h.scale}}; }

Homothet homothetFromJson(const Json& j, const std::string& ptr) {
  requireObject(j, ptr, {"center", "scale"});
  return {vecFromJson(field(j, ptr, "center"), child(ptr, "center")),
          number(field(j, ptr, "scale"), child(ptr, "scale"))};
}

Json toJson(const Move& m) {
  return {{"center", toJson(m.center)}, {"scale", m.scale}, {"annotation", m.annotation}};
}

Move moveFromJson(const Json& j, const std::string& ptr) {
  requireObject(j, ptr, {"center", "scale", "annotation"});
  Move m;
  m.center = vecFromJson(field(j, ptr, "center"), child(ptr, "center"));
  m.scale = number(field(j, ptr, "scale"), child(ptr, "scale"));
  if (j.contains("annotation")) m.annotation = text(j["annotation"], child(ptr, "annotation"));
  return m;
}

Json toJson(const Violation& v) {
  Json j = {{"rule", v.rule}, {"message", v.message}, {"witness", nullptr}};
  if (v.witness) j["witness"] = toJson(*v.witness);
  return j;
}

Json toJson(const RunRecord& r) {
  Json moves = Json::array();
  for (const Move& m : r.moves) moves.push_back(toJson(m));
  Json diags = Json::array();
  for (const MoveDiagnostic& d : r.diagnostics)
    diags.push_back({{"index", d.index},
                     {"player", playerName(d.player)},
                     {"forfeit", d.forfeit},
                     {"fallback", d.fallback},
                     {"violation", d.violation},
                     {"survivorsAfter", d.survivorsAfter}});
  return {{"schema", kRunRecordSchema},
          {"pI", r.pI},
          {"pII", r.pII},
          {"seed", r.seed},
          {"horizon", r.horizon},
          {"bodyName", r.bodyName},
          {"moves", moves},
          {"diagnostics", diags},
          {"survivorsTimeline", r.survivorsTimeline},
          {"status", statusName(r.status)},
          {"certifiedRound", r.certifiedRound},
          {"survivors", r.survivors},
          {"abortReason", r.abortReason}};
}

RunRecord runRecordFromJson(const Json& j) {
  // body and target may be embedded alongside the record.
  requireObject(j, "", {"schema", "pI", "pII", "seed", "horizon", "bodyName", "moves", "diagnostics",
                        "survivorsTimeline", "status", "certifiedRound", "survivors", "abortReason", "body",
                        "target"});
  std::string schema = text(field(j, "", "schema"), "/schema");
  if (schema != kRunRecordSchema) throw JsonError("/schema", "unsupported schema '" + schema + "'");
  RunRecord r;
  r.pI = text(field(j, "", "pI"), "/pI");
  r.pII = text(field(j, "", "pII"), "/pII");
  const Json& seed = field(j, "", "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) throw JsonError("/seed", "expected an unsigned integer");
  r.seed = seed.get<std::uint64_t>();
  r.horizon = static_cast<int>(integer(field(j, "", "horizon"), "/horizon"));
  r.bodyName = text(field(j, "", "bodyName"), "/bodyName");
  const Json& moves = field(j, "", "moves");
  if (!moves.is_array()) throw JsonError("/moves", "expected an array");
  for (size_t i = 0; i < moves.size(); ++i) r.moves.push_back(moveFromJson(moves[i], child("/moves", i)));
  const Json& diags = field(j, "", "diagnostics");
  if (!diags.is_array()) throw JsonError("/diagnostics", "expected an array");
  for (size_t i = 0; i < diags.size(); ++i) {
    std::string p = child("/diagnostics", i);
    const Json& d = diags[i];
    requireObject(d, p, {"index", "player", "forfeit", "fallback", "violation", "survivorsAfter"});
    MoveDiagnostic md;
    md.index = static_cast<int>(integer(field(d, p, "index"), child(p, "index")));
    md.player = playerFromName(text(field(d, p, "player"), child(p, "player")), child(p, "player"));
    md.forfeit = boolean(field(d, p, "forfeit"), child(p, "forfeit"));
    md.fallback = boolean(field(d, p, "fallback"), child(p, "fallback"));
    md.violation = text(field(d, p, "violation"), child(p, "violation"));
    md.survivorsAfter = static_cast<int>(integer(field(d, p, "survivorsAfter"), child(p, "survivorsAfter")));
    r.diagnostics.push_back(md);
  }
  const Json& tl = field(j, "", "survivorsTimeline");
  if (!tl.is_array()) throw JsonError("/survivorsTimeline", "expected an array");
  for (size_t i = 0; i < tl.size(); ++i) r.survivorsTimeline.push_back(intList(tl[i], child("/survivorsTimeline", i)));
  r.status = statusFromName(text(field(j, "", "status"), "/status"), "/status");
  r.certifiedRound = static_cast<int>(integer(field(j, "", "certifiedRound"), "/certifiedRound"));
  r.survivors = intList(field(j, "", "survivors"), "/survivors");
  r.abortReason = text(field(j, "", "abortReason"), "/abortReason");
  return r;
}

Json toJson(const GoodCopyCertificate& c) {
  Json wit = Json::array();
  for (const auto& [x, y] : c.hyperplaneWitnesses) wit.push_back({x, y});
  return {{"copy", toJson(c.copy)},
          {"band", c.band},
          {"limitPoints", c.limitPoints},
          {"projected", toJson(c.projected)},
          {"cover", toJson(c.cover)},
          {"coverScale", c.coverScale},
          {"good", c.good},
          {"insideCount", c.insideCount},
          {"hyperplaneWitnesses", wit}};
}

Json toJson(const BadBall& b) {
  Json refuted = Json::array();
  for (const Homothet& h : b.refuted) refuted.push_back(toJson(h));
  return {{"id", b.ball.id},
          {"center", toJson(b.ball.center)},
          {"radius", b.ball.radius},
          {"members", b.ball.members},
          {"refuted", refuted},
          {"tooFew", b.tooFew}};
}

Json toJson(const StepResult& s) {
  Json balls = Json::array();
  for (const BadBall& b : s.badBalls) balls.push_back(toJson(b));
  return {{"kept", s.kept},
          {"removed", s.removed},
          {"removedBy", pairs(s.removedBy)},
          {"deepestBall", pairs(s.deepestBall)},
          {"badBalls", balls},
          {"ballsExamined", s.ballsExamined},
          {"inconclusiveBalls", s.inconclusiveBalls},
          {"copiesTested", s.copiesTested}};
}

Json toJson(const DerivativeTrace& t, bool certificates) {
  Json stages = Json::array();
  for (const StageRecord& st : t.stages) {
    Json s = {{"points", st.points},
              {"removed", st.removed},
              {"removedBy", pairs(st.removedBy)},
              {"deepestBall", pairs(st.deepestBall)},
              {"ballsExamined", st.ballsExamined},
              {"inconclusiveBalls", st.inconclusiveBalls},
              {"copiesTested", st.copiesTested}};
    if (certificates) {
      Json balls = Json::array();
      for (const BadBall& b : st.badBalls) balls.push_back(toJson(b));
      s["badBalls"] = balls;
    }
    stages.push_back(s);
  }
  return {{"stages", stages},  {"rank", t.rank},         {"complete", t.complete},
          {"fixpoint", t.fixpoint}, {"fixpointSize", t.fixpointSize()}, {"stageOf", t.stageOf}};
}

Json toJson(const FaceLattice& L) {
  Json faces = Json::array();
  for (const Face& f : L.faces)
    faces.push_back({{"id", f.id}, {"dim", f.dim}, {"vertices", f.vertices}, {"active", f.active}});
  return {{"dim", L.dim}, {"faces", faces}, {"covers", L.covers}};
}

FaceLattice latticeFromJson(const Json& j) {
  requireObject(j, "", {"dim", "faces", "covers"});
  FaceLattice L;
  L.dim = static_cast<int>(integer(field(j, "", "dim"), "/dim"));
  const Json& faces = field(j, "", "faces");
  if (!faces.is_array()) throw JsonError("/faces", "expected an array");
  for (size_t i = 0; i < faces.size(); ++i) {
    std::string p = child("/faces", i);
    requireObject(faces[i], p, {"id", "dim", "vertices", "active"});
    Face f;
    f.id = static_cast<int>(integer(field(faces[i], p, "id"), child(p, "id")));
    f.dim = static_cast<int>(integer(field(faces[i], p, "dim"), child(p, "dim")));
    f.vertices = intList(field(faces[i], p, "vertices"), child(p, "vertices"));
    f.active = intList(field(faces[i], p, "active"), child(p, "active"));
    L.faces.push_back(f);
  }
  const Json& covers = field(j, "", "covers");
  if (!covers.is_array() || covers.size() != L.faces.size()) throw JsonError("/covers", "expected one list per face");
  for (size_t i = 0; i < covers.size(); ++i) L.covers.push_back(intList(covers[i], child("/covers", i)));
  return L;
}

Json toJson(const ConeFamily& f) {
  return {{"dim", f.dim},
          {"normals", toJson(f.normals)},
          {"patterns", f.patterns},
          {"representatives", toJson(f.representatives)}};
}

Json toJson(const ColoredPointSet& c) {
  const int n = c.size();
  Json coloring = Json::array();
  Json sides = Json::array();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      coloring.push_back(c.c(a, b));
      if (c.hasSides()) sides.push_back(c.s(a, b));
    }
  Json j = {{"points", toJson(c.points)}, {"colors", c.colors}, {"r", c.r}, {"k", c.k}, {"coloring", coloring}};
  if (c.hasSides()) j["sides"] = sides;
  return j;
}

ColoredPointSet coloredFromJson(const Json& j) {
  requireObject(j, "", {"points", "colors", "r", "k", "coloring", "sides"});
  ColoredPointSet c;
  c.points = pointsFromJson(field(j, "", "points"), "/points");
  c.colors = static_cast<int>(integer(field(j, "", "colors"), "/colors"));
  c.r = number(field(j, "", "r"), "/r");
  c.k = static_cast<int>(integer(field(j, "", "k"), "/k"));
  const size_t n = c.points.size();
  auto col = intList(field(j, "", "coloring"), "/coloring");
  if (col.size() != n * (n - (n > 0 ? 1 : 0)) / 2) throw JsonError("/coloring", "expected one color per pair");
  std::vector<int> sd;
  if (j.contains("sides")) {
    sd = intList(j["sides"], "/sides");
    if (sd.size() != col.size()) throw JsonError("/sides", "expected one sign per pair");
  }
  c.color.assign(n * n, 1);
  if (!sd.empty()) c.side.assign(n * n, 0);
  size_t idx = 0;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b, ++idx) {
      if (col[idx] < 1 || col[idx] > 255) throw JsonError(child("/coloring", idx), "color out of range");
      c.color[a * n + b] = c.color[b * n + a] = static_cast<std::uint8_t>(col[idx]);
      if (!sd.empty()) {
        if (sd[idx] != 1 && sd[idx] != -1) throw JsonError(child("/sides", idx), "sign must be 1 or -1");
        c.side[a * n + b] = static_cast<std::int8_t>(sd[idx]);
        c.side[b * n + a] = static_cast<std::int8_t>(-sd[idx]);
      }
    }
  at("/coloring", [&] {
    c.validate();
    return 0;
  });
  return c;
}

Json toJson(const ThinningResult& r) {
  Json audit = Json::array();
  for (const ThinningStage& s : r.audit)
    audit.push_back({{"color", s.color}, {"deleted", s.deleted}, {"side", s.side}, {"continued", s.continued}});
  return {{"success", r.success}, {"status", r.status},   {"B", r.B},         {"color", r.color},
          {"reference", r.reference}, {"floor", r.floor}, {"audit", audit}};
}

Json toJson(const ExtractResult& r) {
  Json nodes = Json::array();
  for (const ExtractNode& n : r.nodes)
    nodes.push_back({{"copy", toJson(n.copy)}, {"parent", n.parent}, {"childBit", n.childBit}, {"depth", n.depth}});
  Json transcript = Json::array();
  for (const Move& m : r.transcript) transcript.push_back(toJson(m));
  return {{"ok", r.ok},
          {"nodes", nodes},
          {"leaves", r.leaves},
          {"abortReason", r.abortReason},
          {"transcript", transcript}};
}

}  // namespace nobeta::io
