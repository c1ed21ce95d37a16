#pragma once

#include "nobeta/body.hpp"
#include "nobeta/target.hpp"

#include <map>
#include <optional>
#include <vector>

namespace nobeta {

inline constexpr double kDefaultEta = 1e-6;

struct GoodCopyCertificate {
  Homothet copy;
  std::vector<int> band;         // |signedDistance| <= eps
  std::vector<int> limitPoints;  // B(Q): band points that are eps-limits of the interior or along a facet
  std::vector<Vec> projected;    // radial projections of B(Q) onto the boundary of the copy
  Homothet cover;                // minimal enclosing copy of the projections
  double coverScale = 0.0;
  bool good = false;
  int insideCount = 0;           // target points with signedDistance < -tau
  std::vector<std::pair<int, int>> hyperplaneWitnesses;  // (x, y) pairs admitted by the facet clause
};

// Precomputed eps-neighbor lists for a target; shared by every copy test.
class DerivativeContext {
 public:
  DerivativeContext(const ConvexBody& P, const TargetSet& target, double eta = kDefaultEta);
  const ConvexBody& body() const { return *P_; }
  const TargetSet& target() const { return *T_; }
  double eta() const { return eta_; }
  const std::vector<std::vector<int>>& neighbors() const { return nbr_; }
  GoodCopyCertificate evaluate(const Homothet& q) const;

 private:
  const ConvexBody* P_;
  const TargetSet* T_;
  double eta_;
  std::vector<std::vector<int>> nbr_;
};

GoodCopyCertificate isGoodCopy(const ConvexBody& P, const Homothet& q, const TargetSet& target,
                               double eta = kDefaultEta);

struct CandidateBall {
  int id = 0;
  Vec center;
  double radius = 0.0;
  std::vector<int> members;  // indices into the stepped target
};

struct BadBall {
  CandidateBall ball;
  std::vector<Homothet> refuted;  // empty when the ball holds fewer than two points
  bool tooFew = false;
};

struct StepOptions {
  double eta = kDefaultEta;
  int tripleLimit = 24;           // triples only when the ball holds at most this many family points
  long maxCopiesPerBall = 20000;  // beyond this the ball is inconclusive and removes nothing
  // Optional candidate family: balls centered at these points with radii from their
  // diameter, and copies built from them. Defaults to the stepped target itself.
  std::optional<std::vector<Vec>> family;
};

struct StepResult {
  std::vector<int> kept;     // indices into the input target
  std::vector<int> removed;
  std::map<int, int> removedBy;   // removed point -> index into badBalls
  std::map<int, int> deepestBall; // removed point -> bad ball of maximal depth
  std::vector<BadBall> badBalls;
  int ballsExamined = 0;
  int inconclusiveBalls = 0;
  long copiesTested = 0;
};

std::vector<double> dyadicRadii(double eps, double diameter);
StepResult derivativeStep(const ConvexBody& P, const TargetSet& target, const StepOptions& opt = {});

struct StageRecord {
  std::vector<int> points;   // indices into the original target
  std::vector<int> removed;  // original indices removed at this stage
  std::map<int, int> removedBy;  // original index -> index into badBalls
  std::map<int, int> deepestBall;
  std::vector<BadBall> badBalls;  // members mapped to original indices
  int ballsExamined = 0;
  int inconclusiveBalls = 0;
  long copiesTested = 0;
};

struct DerivativeTrace {
  std::vector<StageRecord> stages;  // stage s holds A^s and what the step removed from it
  int rank = -1;                    // first s with A^s = A^{s+1}; -1 if the cap was hit
  bool complete = false;
  std::vector<int> fixpoint;
  std::vector<int> stageOf;  // per original point: s with x in A^s minus A^{s+1}; rank for fixpoint points
  int fixpointSize() const { return static_cast<int>(fixpoint.size()); }
  // Points of A^s (s clamped to the last recorded stage).
  const std::vector<int>& stagePoints(int s) const;
};

DerivativeTrace rankTrace(const ConvexBody& P, const TargetSet& target, int maxStages, const StepOptions& opt = {});

// Legal region for a copy: inside outer, disjoint from excluded.
struct Region {
  Homothet outer;
  std::optional<Homothet> excluded;
};

struct SearchOptions {
  double eta = kDefaultEta;
  int tripleLimit = 24;
  long maxCopies = 60000;
  // When non-empty, only copies containing at least one of these points are considered.
  std::vector<int> mustContain;
  // Rank by interior count first instead of |B| first.
  bool preferInterior = false;
  // Further copies to consider besides the pair and triple family.
  std::vector<Homothet> extraCopies;
};

// Best good copy (max |B|, then insideCount, then scale) among copies built from
// pairs and triples of the given candidate points, restricted to the region.
std::optional<GoodCopyCertificate> goodCopySearch(const DerivativeContext& ctx, const Region& region,
                                                  const std::vector<int>& candidates, const SearchOptions& opt = {});
std::optional<GoodCopyCertificate> goodCopySearch(const ConvexBody& P, const Region& region, const TargetSet& target,
                                                  double eta = kDefaultEta);

// Copy fits inside the open ball.
bool copyInsideBall(const ConvexBody& P, const Homothet& q, const Vec& center, double radius);
// Copy inside outer and disjoint from excluded.
bool copyInRegion(const ConvexBody& P, const Homothet& q, const Region& region);

}  // namespace nobeta
