#pragma once

#include "nobeta/body.hpp"
#include "nobeta/derivative.hpp"
#include "nobeta/target.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nobeta {

enum class Player { I, II };
enum class GameStatus { Ongoing, IICertified, HorizonReached, Aborted };

std::string playerName(Player p);
std::string statusName(GameStatus s);

struct Move {
  Vec center;
  double scale = 0.0;
  std::string annotation;
  Homothet copy() const { return {center, scale}; }
};

struct Violation {
  std::string rule;  // "bad-move", "not-nested", "not-disjoint", "scale-not-smaller", "game-over"
  std::string message;
  std::optional<Vec> witness;
};

class GameState {
 public:
  GameState(std::shared_ptr<const ConvexBody> body, TargetSet target);

  const ConvexBody& body() const { return *body_; }
  std::shared_ptr<const ConvexBody> bodyPtr() const { return body_; }
  const TargetSet& target() const { return target_; }
  const std::vector<Move>& moves() const { return moves_; }
  Player toMove() const { return moves_.size() % 2 == 0 ? Player::I : Player::II; }
  // Completed I-moves.
  int round() const { return static_cast<int>((moves_.size() + 1) / 2); }
  const std::vector<int>& survivors() const { return survivors_; }
  GameStatus status() const { return status_; }
  bool ongoing() const { return status_ == GameStatus::Ongoing; }
  // Round at which survivors became empty; -1 if not certified.
  int certifiedRound() const { return certifiedRound_; }

  // Last I-move and last II-move, if any.
  std::optional<Homothet> lastI() const;
  std::optional<Homothet> lastII() const;

  std::optional<Violation> validate(const Move& m) const;
  // Throws InvalidArgument on an illegal move; state is unchanged then.
  void apply(const Move& m);
  void markHorizon();
  void markAborted();

 private:
  std::shared_ptr<const ConvexBody> body_;
  TargetSet target_;
  std::vector<Move> moves_;
  std::vector<int> survivors_;
  GameStatus status_ = GameStatus::Ongoing;
  int certifiedRound_ = -1;
};

struct Outcome {
  GameStatus status;
  int round;
  std::vector<int> survivors;
};
Outcome outcome(const GameState& s);

// Default opening: minimal enclosing copy of the target scaled by 1.25.
Homothet defaultOpening(const ConvexBody& P, const TargetSet& target);

// A strategy returns a move or nothing (forfeit). It must be a pure function of
// (state, seed).
struct Strategy {
  std::string tag;
  std::function<std::optional<Move>(const GameState&, std::uint64_t)> play;
};

Strategy enumerateDeleter();
Strategy randomLegal(int maxRejections = 1000);
Strategy goodCopyPlayer(std::shared_ptr<const DerivativeTrace> trace);
Strategy rankReducer(std::shared_ptr<const DerivativeTrace> trace);
// Builds the trace itself (maxStages stages).
Strategy goodCopyPlayer(const ConvexBody& P, const TargetSet& target, int maxStages = 8);
Strategy rankReducer(const ConvexBody& P, const TargetSet& target, int maxStages = 8);

// Deterministic legal move for I: nested in the last I-move, disjoint from the
// last II-move, preferring copies that keep a survivor.
std::optional<Move> safeMoveI(const GameState& s);
// Residual contact bound used by rankReducer's deletion phase.
int residualBound(const ConvexBody& P, const GameState& s);

struct MoveDiagnostic {
  int index = 0;
  Player player = Player::I;
  bool forfeit = false;       // strategy returned nothing or an illegal move
  bool fallback = false;      // move came from the fallback rule
  std::string violation;      // rule broken by the strategy's own move, if any
  int survivorsAfter = 0;
};

struct RunRecord {
  std::string pI, pII;
  std::uint64_t seed = 0;
  int horizon = 0;
  std::string bodyName;
  std::vector<Move> moves;
  std::vector<MoveDiagnostic> diagnostics;
  std::vector<std::vector<int>> survivorsTimeline;  // after each I-move
  GameStatus status = GameStatus::Ongoing;
  int certifiedRound = -1;
  std::vector<int> survivors;
  std::string abortReason;
};

// horizon counts rounds (one I-move and one II-move each).
RunRecord playMatch(const Strategy& sI, const Strategy& sII, std::shared_ptr<const ConvexBody> body,
                    const TargetSet& target, int horizon, std::uint64_t seed);
// Re-applies the moves of a record; throws InvalidArgument if a move is illegal.
GameState replay(std::shared_ptr<const ConvexBody> body, const TargetSet& target, const RunRecord& rec);

struct ExtractNode {
  Homothet copy;
  int parent = -1;
  int childBit = -1;
  int depth = 0;
  std::vector<Move> history;  // position ending with I's move producing this node
};

struct ExtractResult {
  bool ok = false;
  std::vector<ExtractNode> nodes;  // breadth-first, root first
  std::vector<int> leaves;
  std::string abortReason;
  std::vector<Move> transcript;  // offending position when aborted
};

// Binary tree of I's replies built by probing sI with inner copies of scale > 1/2.
ExtractResult perfectSetExtract(const Strategy& sI, std::shared_ptr<const ConvexBody> body, const TargetSet& target,
                                int depth, std::uint64_t seed = 0);

}  // namespace nobeta
