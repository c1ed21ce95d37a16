#include "nobeta/session.hpp"

#include "nobeta/boundary.hpp"
#include "nobeta/catalog.hpp"
#include "nobeta/cones.hpp"
#include "nobeta/rng.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace nobeta::service {

namespace {

constexpr const char* kSnapshotSchema = "nobeta.session/1";

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::optional<Player> sideFromName(const std::string& s) {
  if (s == "I") return Player::I;
  if (s == "II") return Player::II;
  if (s == "none") return std::nullopt;
  throw ServiceError(400, "bad-request", "humanSide must be I, II or none");
}

std::string sideName(const std::optional<Player>& p) { return p ? playerName(*p) : "none"; }

ServiceError badRequest(const std::exception& e) { return ServiceError(400, "bad-request", e.what()); }

// Move payload with an optional revision guard.
std::pair<Move, std::optional<int>> readMove(const Json& req) {
  Json body = req;
  std::optional<int> rev;
  if (body.is_object() && body.contains("revision")) {
    if (!body["revision"].is_number_integer()) throw ServiceError(400, "bad-request", "/revision: expected an integer");
    rev = body["revision"].get<int>();
    body.erase("revision");
  }
  try {
    return {io::moveFromJson(body), rev};
  } catch (const io::JsonError& e) {
    throw badRequest(e);
  }
}

}  // namespace

Json ServiceError::payload() const {
  Json j = {{"code", code_}, {"rule", rule_}, {"witness", nullptr}, {"message", what()}};
  if (witness_) j["witness"] = io::toJson(*witness_);
  return j;
}

SessionManager::SessionManager(Options opt) : opt_(std::move(opt)) {
  if (opt_.snapshotDir) std::filesystem::create_directories(*opt_.snapshotDir);
}

std::size_t SessionManager::size() const {
  std::shared_lock lk(mu_);
  return sessions_.size();
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::shared_lock lk(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "not-found", "no session '" + id + "'");
  return it->second;
}

std::shared_ptr<Session> SessionManager::build(const Json& req, const std::string& id) {
  if (!req.is_object()) throw ServiceError(400, "bad-request", "expected a JSON object");
  for (const auto& [k, v] : req.items())
    if (k != "body" && k != "target" && k != "humanSide" && k != "strategy" && k != "seed" && k != "horizon")
      throw ServiceError(400, "bad-request", "/" + k + ": unknown field");
  auto s = std::make_shared<Session>();
  s->id = id;
  try {
    if (req.contains("seed")) {
      if (!req["seed"].is_number_integer() || req["seed"].get<long long>() < 0) throw ServiceError(400, "bad-request", "/seed: expected an unsigned integer");
      s->seed = req["seed"].get<std::uint64_t>();
    }
    s->bodySpec = req.value("body", Json("disk"));
    s->targetSpec = req.value("target", Json("circle-200"));
    auto nested = [](const std::string& where, auto&& fn) {
      try {
        return fn();
      } catch (const io::JsonError& e) {
        throw ServiceError(400, "bad-request", where + (e.pointer() == "/" ? "" : e.pointer()) + ": " +
                                                   std::string(e.what()).substr(e.pointer().size() + 2));
      }
    };
    ConvexBody P = s->bodySpec.is_string() ? catalog::body(s->bodySpec.get<std::string>(), s->seed)
                                           : nested("/body", [&] { return io::bodyFromJson(s->bodySpec); });
    s->target = s->targetSpec.is_string()
                    ? catalog::target(s->targetSpec.get<std::string>(), s->seed)
                    : nested("/target", [&] { return io::targetFromJson(s->targetSpec); });
    if (s->target.dim != P.dim()) throw ServiceError(400, "bad-request", "/target: dimension differs from the body");
    s->body = std::make_shared<const ConvexBody>(std::move(P));
    Json side = req.value("humanSide", Json("I"));
    if (!side.is_string()) throw ServiceError(400, "bad-request", "/humanSide: expected a string");
    s->human = sideFromName(side.get<std::string>());
    Json tag = req.value("strategy", Json("rank"));
    if (!tag.is_string()) throw ServiceError(400, "bad-request", "/strategy: expected a string");
    s->strategyTag = tag.get<std::string>();
    s->machine = catalog::strategy(s->strategyTag, *s->body, s->target);
    if (req.contains("horizon")) {
      if (!req["horizon"].is_number_integer() || req["horizon"].get<int>() < 0)
        throw ServiceError(400, "bad-request", "/horizon: expected a non-negative integer");
      s->horizon = req["horizon"].get<int>();
    }
  } catch (const InvalidArgument& e) {
    throw badRequest(e);
  } catch (const PreconditionViolation& e) {
    throw badRequest(e);
  }
  s->state = std::make_unique<GameState>(s->body, s->target);
  s->movesAt = {0};
  s->statusAt = {GameStatus::Ongoing};
  return s;
}

Json SessionManager::create(const Json& req) {
  std::string id;
  {
    std::unique_lock lk(mu_);
    do {
      id = "s" + hex(deriveSeed(0x5E5510, counter_++));
    } while (sessions_.count(id));
  }
  auto s = build(req, id);
  std::lock_guard sl(s->mu);
  if (s->human && *s->human == Player::II) machineReply(*s);
  persist(*s);
  {
    std::unique_lock lk(mu_);
    sessions_[id] = s;
  }
  return summary(*s);
}

Json SessionManager::summary(const Session& s) const {
  const GameState& g = *s.state;
  return {{"id", s.id},
          {"revision", s.revision},
          {"humanSide", sideName(s.human)},
          {"strategy", s.strategyTag},
          {"seed", s.seed},
          {"horizon", s.horizon},
          {"toMove", playerName(g.toMove())},
          {"round", g.round()},
          {"status", statusName(g.status())},
          {"certifiedRound", g.certifiedRound()},
          {"survivors", g.survivors()},
          {"moveCount", g.moves().size()}};
}

void SessionManager::bump(Session& s) {
  ++s.revision;
  s.movesAt.push_back(s.state->moves().size());
  s.statusAt.push_back(s.state->status());
}

void SessionManager::applyMove(Session& s, const Move& m, const std::string& flag) {
  s.state->apply(m);
  s.flags.push_back(flag);
  if (s.horizon > 0 && s.state->moves().size() >= 2 * static_cast<std::size_t>(s.horizon) && s.state->ongoing())
    s.state->markHorizon();
  bump(s);
}

std::string SessionManager::machineReply(Session& s) {
  GameState& g = *s.state;
  if (g.status() == GameStatus::Aborted || g.status() == GameStatus::HorizonReached) return "";
  const Player side = g.toMove();
  const std::uint64_t seed = deriveSeed(s.seed, g.moves().size());
  std::optional<Move> m;
  std::string flag;
  bool timedOut = opt_.budgetSeconds <= 0.0;
  if (!timedOut) {
    // The worker owns copies of everything it touches, so an abandoned
    // computation cannot race the session.
    auto snapshot = std::make_shared<const GameState>(g);
    auto prom = std::make_shared<std::promise<std::optional<Move>>>();
    auto fut = prom->get_future();
    std::thread([prom, snapshot, strat = s.machine, seed] {
      try {
        prom->set_value(strat.play(*snapshot, seed));
      } catch (...) {
        prom->set_exception(std::current_exception());
      }
    }).detach();
    if (fut.wait_for(std::chrono::duration<double>(opt_.budgetSeconds)) == std::future_status::ready) {
      try {
        m = fut.get();
      } catch (const std::exception&) {
        m.reset();
      }
      if (!m || g.validate(*m)) {
        m.reset();
        flag = "fallback";
      }
    } else {
      timedOut = true;
    }
  }
  if (timedOut) flag = "over-budget";
  if (!m) {
    Strategy fb = side == Player::II ? enumerateDeleter() : randomLegal();
    try {
      m = fb.play(g, seed);
    } catch (const std::exception&) {
      m.reset();
    }
    if (m && g.validate(*m)) m.reset();
    if (m) m->annotation = flag + ": " + fb.tag + (m->annotation.empty() ? "" : " (" + m->annotation + ")");
  }
  if (!m) {
    g.markAborted();
    bump(s);
    return "forfeit";
  }
  applyMove(s, *m, flag);
  return flag;
}

Json SessionManager::state(const std::string& id, int since) {
  auto s = find(id);
  std::lock_guard sl(s->mu);
  if (since < 0 || since > s->revision)
    throw ServiceError(400, "bad-revision", "since must be in [0, " + std::to_string(s->revision) + "]");
  std::size_t first = *std::min_element(s->movesAt.begin() + since, s->movesAt.end());
  Json moves = Json::array();
  Json flags = Json::array();
  for (std::size_t i = first; i < s->state->moves().size(); ++i) {
    moves.push_back(io::toJson(s->state->moves()[i]));
    flags.push_back(s->flags[i]);
  }
  Json j = summary(*s);
  j["since"] = since;
  j["changed"] = since != s->revision;
  j["firstMove"] = first;
  j["moves"] = moves;
  j["flags"] = flags;
  return j;
}

Json SessionManager::preview(const std::string& id, const Json& req) {
  auto [m, rev] = readMove(req);
  auto s = find(id);
  std::lock_guard sl(s->mu);
  Json j = {{"revision", s->revision}, {"legal", true}, {"violation", nullptr}};
  if (rev && *rev != s->revision) {
    j["legal"] = false;
    j["violation"] = {{"rule", "stale-revision"}, {"message", "state has moved on"}, {"witness", nullptr}};
  } else if (s->human && s->state->toMove() != *s->human) {
    j["legal"] = false;
    j["violation"] = {{"rule", "wrong-turn"}, {"message", "not the human's turn"}, {"witness", nullptr}};
  } else if (auto v = s->state->validate(m)) {
    j["legal"] = false;
    j["violation"] = io::toJson(*v);
  }
  return j;
}

Json SessionManager::submit(const std::string& id, const Json& req) {
  auto [m, rev] = readMove(req);
  auto s = find(id);
  std::lock_guard sl(s->mu);
  if (rev && *rev != s->revision) throw ServiceError(409, "stale-revision", "state has moved on", "stale-revision");
  if (s->human && s->state->toMove() != *s->human)
    throw ServiceError(409, "wrong-turn", "not the human's turn", "wrong-turn");
  if (auto v = s->state->validate(m)) throw ServiceError(422, "illegal-move", v->message, v->rule, v->witness);
  applyMove(*s, m, "");
  Json human = io::toJson(m);
  Json machine = nullptr;
  std::string flag;
  if (s->human && s->state->toMove() != *s->human) {
    std::size_t before = s->state->moves().size();
    flag = machineReply(*s);
    if (s->state->moves().size() > before) machine = io::toJson(s->state->moves().back());
  }
  persist(*s);
  Json j = summary(*s);
  j["accepted"] = true;
  j["human"] = human;
  j["machine"] = machine;
  j["machineFlag"] = flag;
  return j;
}

void SessionManager::restoreTo(Session& s, int revision) {
  const std::size_t n = s.movesAt[revision];
  std::vector<Move> keep(s.state->moves().begin(), s.state->moves().begin() + static_cast<long>(n));
  std::vector<std::string> flags(s.flags.begin(), s.flags.begin() + static_cast<long>(n));
  s.state = std::make_unique<GameState>(s.body, s.target);
  s.flags.clear();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.state->apply(keep[i]);
    s.flags.push_back(flags[i]);
  }
  if (s.statusAt[revision] == GameStatus::Aborted) s.state->markAborted();
  if (s.statusAt[revision] == GameStatus::HorizonReached) s.state->markHorizon();
}

Json SessionManager::undo(const std::string& id, int toRevision) {
  auto s = find(id);
  std::lock_guard sl(s->mu);
  if (!s->human) throw ServiceError(409, "undo-unavailable", "undo needs a human-vs-machine session");
  if (toRevision < 0 || toRevision > s->revision)
    throw ServiceError(400, "bad-revision", "toRevision must be in [0, " + std::to_string(s->revision) + "]");
  std::size_t n = s->movesAt[toRevision];
  if (*std::min_element(s->movesAt.begin() + toRevision, s->movesAt.end()) < n)
    throw ServiceError(409, "revision-unreachable", "that revision was itself undone");
  restoreTo(*s, toRevision);
  bump(*s);
  if (s->state->toMove() != *s->human) machineReply(*s);
  persist(*s);
  return summary(*s);
}

Json SessionManager::overlays(const std::string& id, const std::vector<std::string>& kinds) {
  auto s = find(id);
  std::lock_guard sl(s->mu);
  Json out = {{"revision", s->revision}};
  for (const std::string& kind : kinds) {
    auto it = s->overlayCache.find(kind);
    // Cones and ranks do not depend on the position; they are cached at revision -1.
    if (it != s->overlayCache.end() && (it->second.first == s->revision || it->second.first == -1)) {
      out[kind] = it->second.second;
      continue;
    }
    Json payload;
    int key = s->revision;
    const ConvexBody& P = *s->body;
    if (kind == "goodCopies") {
      const GameState& g = *s->state;
      Region region{g.lastI().value_or(defaultOpening(P, s->target)), std::nullopt};
      if (g.toMove() == Player::I && g.lastII()) region.excluded = g.lastII();
      DerivativeContext ctx(P, s->target);
      std::vector<int> cand = g.survivors();
      SearchOptions so;
      so.tripleLimit = 8;
      so.maxCopies = 20000;
      Json items = Json::array();
      if (!cand.empty())
        if (auto c = goodCopySearch(ctx, region, cand, so)) items.push_back(io::toJson(*c));
      payload = {{"region", {{"outer", io::toJson(region.outer)},
                             {"excluded", region.excluded ? io::toJson(*region.excluded) : Json(nullptr)}}},
                 {"items", items}};
    } else if (kind == "cones") {
      key = -1;
      if (P.dim() != 2) {
        payload = {{"available", false}, {"reason", "cone fans are planar"}};
      } else {
        DeltaResult d = deltaGlobal(P);
        double angle = std::min(angleForDelta(std::max(d.value, 1e-3)), 0.7853981633974483);
        ConeFamily fam = refinedFamily2D(angle);
        payload = {{"available", true}, {"delta", d.value}, {"maxAngle", angle}, {"family", io::toJson(fam)}};
      }
    } else if (kind == "ranks") {
      key = -1;
      DerivativeTrace t = rankTrace(P, s->target, 8);
      payload = {{"rank", t.rank},
                 {"complete", t.complete},
                 {"fixpointSize", t.fixpointSize()},
                 {"stageOf", t.stageOf}};
    } else {
      throw ServiceError(400, "bad-request", "unknown overlay kind '" + kind + "' (goodCopies, cones, ranks)");
    }
    s->overlayCache[kind] = {key, payload};
    out[kind] = payload;
  }
  return out;
}

Json SessionManager::snapshotLocked(const Session& s) const {
  Json moves = Json::array();
  for (const Move& m : s.state->moves()) moves.push_back(io::toJson(m));
  Json status = Json::array();
  for (GameStatus g : s.statusAt) status.push_back(statusName(g));
  return {{"schema", kSnapshotSchema}, {"id", s.id},
          {"body", s.bodySpec},        {"target", s.targetSpec},
          {"humanSide", sideName(s.human)}, {"strategy", s.strategyTag},
          {"seed", s.seed},            {"horizon", s.horizon},
          {"revision", s.revision},    {"movesAt", s.movesAt},
          {"statusAt", status},        {"flags", s.flags},
          {"moves", moves}};
}

Json SessionManager::snapshot(const std::string& id) {
  auto s = find(id);
  std::lock_guard sl(s->mu);
  return snapshotLocked(*s);
}

void SessionManager::persist(const Session& s) const {
  if (!opt_.snapshotDir) return;
  auto path = *opt_.snapshotDir / (s.id + ".json");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp);
    f << io::dump(snapshotLocked(s));
  }
  std::filesystem::rename(tmp, path);
}

int SessionManager::loadSnapshots() {
  if (!opt_.snapshotDir) return 0;
  int loaded = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(*opt_.snapshotDir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream f(path);
    std::stringstream buf;
    buf << f.rdbuf();
    Json j = io::parse(buf.str());
    if (j.value("schema", "") != kSnapshotSchema) throw InvalidArgument(path.string() + ": not a session snapshot");
    Json req = {{"body", j["body"]},         {"target", j["target"]}, {"humanSide", j["humanSide"]},
                {"strategy", j["strategy"]}, {"seed", j["seed"]},     {"horizon", j["horizon"]}};
    auto s = build(req, j["id"].get<std::string>());
    for (const Json& m : j["moves"]) {
      s->state->apply(io::moveFromJson(m));
    }
    s->flags = j["flags"].get<std::vector<std::string>>();
    s->revision = j["revision"].get<int>();
    s->movesAt = j["movesAt"].get<std::vector<std::size_t>>();
    s->statusAt.clear();
    for (const Json& st : j["statusAt"]) {
      std::string name = st.get<std::string>();
      GameStatus g = GameStatus::Ongoing;
      for (GameStatus c : {GameStatus::IICertified, GameStatus::HorizonReached, GameStatus::Aborted})
        if (statusName(c) == name) g = c;
      s->statusAt.push_back(g);
    }
    if (s->statusAt.back() == GameStatus::Aborted) s->state->markAborted();
    if (s->statusAt.back() == GameStatus::HorizonReached) s->state->markHorizon();
    std::unique_lock lk(mu_);
    sessions_[s->id] = s;
    ++loaded;
  }
  return loaded;
}

void installRoutes(httplib::Server& server, SessionManager& mgr) {
  auto reply = [](httplib::Response& res, int status, const Json& j) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
  };
  // Runs a handler, mapping failures onto {code, rule, witness}.
  auto guard = [reply](httplib::Response& res, int okStatus, const std::function<Json()>& fn) {
    try {
      reply(res, okStatus, fn());
    } catch (const ServiceError& e) {
      reply(res, e.status(), e.payload());
    } catch (const io::JsonError& e) {
      reply(res, 400, ServiceError(400, "bad-request", e.what()).payload());
    } catch (const InvalidArgument& e) {
      reply(res, 400, ServiceError(400, "bad-request", e.what()).payload());
    } catch (const std::exception& e) {
      reply(res, 500, ServiceError(500, "internal", e.what()).payload());
    }
  };
  auto body = [](const httplib::Request& req) {
    if (req.body.empty()) return Json::object();
    return io::parse(req.body);
  };
  server.Post("/sessions", [&mgr, guard, body](const httplib::Request& req, httplib::Response& res) {
    guard(res, 201, [&] { return mgr.create(body(req)); });
  });
  server.Get(R"(/sessions/([^/]+))", [&mgr, guard](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] {
      int since = 0;
      if (req.has_param("since")) {
        try {
          since = std::stoi(req.get_param_value("since"));
        } catch (const std::exception&) {
          throw ServiceError(400, "bad-request", "since must be an integer");
        }
      }
      return mgr.state(req.matches[1], since);
    });
  });
  server.Post(R"(/sessions/([^/]+)/moves)", [&mgr, guard, body](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] { return mgr.submit(req.matches[1], body(req)); });
  });
  server.Post(R"(/sessions/([^/]+)/preview)", [&mgr, guard, body](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] { return mgr.preview(req.matches[1], body(req)); });
  });
  server.Post(R"(/sessions/([^/]+)/undo)", [&mgr, guard, body](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] {
      Json j = body(req);
      if (!j.contains("toRevision") || !j["toRevision"].is_number_integer())
        throw ServiceError(400, "bad-request", "/toRevision: expected an integer");
      return mgr.undo(req.matches[1], j["toRevision"].get<int>());
    });
  });
  server.Get(R"(/sessions/([^/]+)/overlays)", [&mgr, guard](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] {
      std::vector<std::string> kinds;
      std::string list = req.has_param("kinds") ? req.get_param_value("kinds") : "goodCopies,cones,ranks";
      std::stringstream ss(list);
      std::string k;
      while (std::getline(ss, k, ','))
        if (!k.empty()) kinds.push_back(k);
      return mgr.overlays(req.matches[1], kinds);
    });
  });
  server.Get(R"(/sessions/([^/]+)/snapshot)", [&mgr, guard](const httplib::Request& req, httplib::Response& res) {
    guard(res, 200, [&] { return mgr.snapshot(req.matches[1]); });
  });
  server.set_error_handler([reply](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) reply(res, res.status, ServiceError(res.status, "not-found", "no such route").payload());
  });
}

}  // namespace nobeta::service
