#pragma once

#include "nobeta/game.hpp"
#include "nobeta/io.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace nobeta::service {

using io::Json;

// Errors carry an HTTP status plus the wire payload {code, rule, witness}.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message, std::string rule = "",
               std::optional<Vec> witness = std::nullopt)
      : std::runtime_error(message), status_(status), code_(std::move(code)), rule_(std::move(rule)),
        witness_(std::move(witness)) {}
  int status() const { return status_; }
  Json payload() const;

 private:
  int status_;
  std::string code_;
  std::string rule_;
  std::optional<Vec> witness_;
};

struct Options {
  double budgetSeconds = 5.0;  // machine reply budget
  std::optional<std::filesystem::path> snapshotDir;
};

// One game plus its bookkeeping. All access goes through SessionManager, which
// holds the session's mutex.
struct Session {
  std::string id;
  std::shared_ptr<const ConvexBody> body;
  TargetSet target;
  Json bodySpec, targetSpec;
  std::optional<Player> human;  // none: both sides submitted by hand, no machine
  std::string strategyTag;
  Strategy machine;
  std::uint64_t seed = 0;
  int horizon = 0;              // rounds; 0 means unbounded
  std::unique_ptr<GameState> state;
  int revision = 0;
  std::vector<std::size_t> movesAt;  // move count at each revision
  std::vector<GameStatus> statusAt;  // status at each revision
  std::vector<std::string> flags;    // per move: "", "over-budget", "fallback", "forfeit"
  std::map<std::string, std::pair<int, Json>> overlayCache;
  std::mutex mu;
};

class SessionManager {
 public:
  explicit SessionManager(Options opt = {});

  // {body, target, humanSide: "I" | "II" | "none", strategy, seed, horizon?}; body and
  // target are JSON objects or catalog names.
  Json create(const Json& req);
  Json state(const std::string& id, int since = 0);
  Json submit(const std::string& id, const Json& move);
  Json preview(const std::string& id, const Json& move);
  Json undo(const std::string& id, int toRevision);
  Json overlays(const std::string& id, const std::vector<std::string>& kinds);
  Json snapshot(const std::string& id);
  // Restores every snapshot in the directory; returns how many were loaded.
  int loadSnapshots();
  std::size_t size() const;

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Session> build(const Json& req, const std::string& id);
  Json summary(const Session& s) const;
  Json snapshotLocked(const Session& s) const;
  void bump(Session& s);
  void persist(const Session& s) const;
  // Machine move with budget and fallback; returns the flag.
  std::string machineReply(Session& s);
  void restoreTo(Session& s, int revision);
  void applyMove(Session& s, const Move& m, const std::string& flag);

  Options opt_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

// Routes of the HTTP+JSON protocol.
void installRoutes(httplib::Server& server, SessionManager& mgr);

}  // namespace nobeta::service
