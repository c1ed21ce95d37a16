// Batch interface over the nobeta library. Exit codes: 0 ok, 2 validation
// error, 3 resource limit.
#include "nobeta/body.hpp"
#include "nobeta/boundary.hpp"
#include "nobeta/catalog.hpp"
#include "nobeta/cones.hpp"
#include "nobeta/derivative.hpp"
#include "nobeta/faces.hpp"
#include "nobeta/game.hpp"
#include "nobeta/generators.hpp"
#include "nobeta/io.hpp"
#include "nobeta/session.hpp"
#include "nobeta/svg.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

using namespace nobeta;
using io::Json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

std::string readFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// Rethrows loader errors with the file name in front of the pointer.
template <typename F>
auto fromFile(const std::string& path, F&& load) {
  Json j = io::parse(readFile(path));
  try {
    return load(j);
  } catch (const io::JsonError& e) {
    throw io::JsonError(path + "#" + e.pointer(), std::string(e.what()).substr(e.pointer().size() + 2));
  }
}

bool usesSeed(const std::string& name) { return name.rfind("scatter", 0) == 0 || name.rfind("random", 0) == 0; }

// A file path (anything ending in .json or naming an existing file) or a catalog name.
ConvexBody loadBody(const std::string& spec, std::optional<std::uint64_t> seed) {
  if (std::filesystem::exists(spec) || spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
    return fromFile(spec, [](const Json& j) { return io::bodyFromJson(j); });
  if (usesSeed(spec) && !seed) throw InvalidArgument("body '" + spec + "' is random; pass --seed");
  return catalog::body(spec, seed.value_or(0));
}

TargetSet loadTarget(const std::string& spec, std::optional<std::uint64_t> seed) {
  if (std::filesystem::exists(spec) || spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
    return fromFile(spec, [](const Json& j) { return io::targetFromJson(j); });
  if (usesSeed(spec) && !seed) throw InvalidArgument("target '" + spec + "' is random; pass --seed");
  return catalog::target(spec, seed.value_or(0));
}

void requireSameDim(const ConvexBody& P, const TargetSet& t) {
  if (P.dim() != t.dim) throw InvalidArgument("target dimension differs from the body");
}

struct Output {
  std::string path;
  std::string format = "json";

  void emit(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    f << text;
  }
  void json(const Json& j) const { emit(format == "text" ? j.dump(2) + "\n" : io::dump(j)); }
  void requireJsonOrSvg(bool svgAllowed) const {
    if (format == "svg" && !svgAllowed) throw InvalidArgument("this subcommand has no SVG output");
  }
};

void addOutput(CLI::App* sub, Output& out) {
  sub->add_option("--out,-o", out.path, "Output path (default stdout)");
  sub->add_option("--format", out.format, "json | svg | text")->check(CLI::IsMember({"json", "svg", "text"}));
}

std::vector<Vec> parsePoints(const std::string& s) { return io::pointsFromJson(io::parse(s)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for the no-beta McMullen game on convex bodies"};
  app.require_subcommand(1);
  Output out;
  std::optional<std::uint64_t> seed;
  std::string bodySpec = "disk", targetSpec = "circle-200";
  double eta = kDefaultEta;

  // body / target
  std::string genName, inPath;
  std::optional<double> epsOverride;
  auto* cBody = app.add_subcommand("body", "Construct or validate a body");
  cBody->add_option("--gen", genName, "Catalog name: " + [] {
    std::string s;
    for (const auto& n : catalog::bodyNames()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  cBody->add_option("--in", inPath, "Body JSON to validate");
  cBody->add_option("--seed", seed, "Seed for random bodies");
  addOutput(cBody, out);

  auto* cTarget = app.add_subcommand("target", "Construct or validate a target set");
  cTarget->add_option("--gen", genName, "Catalog name: " + [] {
    std::string s;
    for (const auto& n : catalog::targetNames()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  cTarget->add_option("--in", inPath, "Target JSON to validate");
  cTarget->add_option("--seed", seed, "Seed for random targets");
  cTarget->add_option("--eps", epsOverride, "Override the resolution eps");
  addOutput(cTarget, out);

  // geometry queries
  std::string pointStr, pointsStr, dirStr;
  auto* cDelta = app.add_subcommand("delta", "delta_P at a boundary point, or its global minimum");
  cDelta->add_option("--body", bodySpec, "Body file or catalog name")->required();
  cDelta->add_option("--point", pointStr, "Boundary point as [x, y, ...]");
  cDelta->add_option("--seed", seed, "Seed for random bodies");
  addOutput(cDelta, out);

  auto* cMinhull = app.add_subcommand("minhull", "Minimal enclosing homothet of a point set");
  cMinhull->add_option("--body", bodySpec)->required();
  cMinhull->add_option("--points", pointsStr, "Points as [[x, y], ...]")->required();
  cMinhull->add_option("--seed", seed, "Seed for random bodies");
  addOutput(cMinhull, out);

  auto* cMaxchord = app.add_subcommand("maxchord", "Longest chord in a direction");
  cMaxchord->add_option("--body", bodySpec)->required();
  cMaxchord->add_option("--dir", dirStr, "Direction as [x, y, ...]")->required();
  cMaxchord->add_option("--seed", seed, "Seed for random bodies");
  addOutput(cMaxchord, out);

  auto* cFaces = app.add_subcommand("faces", "Face lattice of a polytope");
  cFaces->add_option("--body", bodySpec)->required();
  cFaces->add_option("--seed", seed, "Seed for random bodies");
  addOutput(cFaces, out);

  // derivative
  std::string copyStr;
  int maxStages = 8;
  bool fullTrace = false;
  auto* cDerive = app.add_subcommand("derive", "One derivative step, or a good-copy certificate with --copy");
  cDerive->add_option("--body", bodySpec)->required();
  cDerive->add_option("--target", targetSpec)->required();
  cDerive->add_option("--copy", copyStr, "Copy as {\"center\": [..], \"scale\": t}");
  cDerive->add_option("--eta", eta, "Strictness margin");
  cDerive->add_option("--seed", seed, "Seed for random targets");
  cDerive->add_option("--eps", epsOverride, "Override the target resolution");
  addOutput(cDerive, out);

  auto* cRank = app.add_subcommand("rank", "Derivative rank and fixpoint size");
  cRank->add_option("--body", bodySpec)->required();
  cRank->add_option("--target", targetSpec)->required();
  cRank->add_option("--max-stages", maxStages, "Stage cap");
  cRank->add_option("--eta", eta, "Strictness margin");
  cRank->add_option("--seed", seed, "Seed for random targets");
  cRank->add_option("--eps", epsOverride, "Override the target resolution");
  cRank->add_flag("--trace", fullTrace, "Emit the full trace with certificates");
  addOutput(cRank, out);

  // game
  std::string pI = "goodcopy", pII = "rank";
  int horizon = 30, tournament = 0, depth = 3, workers = 0;
  auto* cPlay = app.add_subcommand("play", "Run a match and print its RunRecord");
  cPlay->add_option("--pI", pI, "enumerate | random | goodcopy | rank");
  cPlay->add_option("--pII", pII, "enumerate | random | goodcopy | rank");
  cPlay->add_option("--body", bodySpec, "Body file or catalog name (default disk)");
  cPlay->add_option("--target", targetSpec, "Target file or catalog name (default circle-200)");
  cPlay->add_option("--horizon", horizon, "Rounds");
  cPlay->add_option("--seed", seed, "Match seed")->required();
  cPlay->add_option("--tournament", tournament, "Play this many matches with seeds seed, seed+1, ...");
  cPlay->add_option("--workers", workers, "Worker threads for --tournament (default: hardware)");
  addOutput(cPlay, out);

  std::string recordPath;
  auto* cReplay = app.add_subcommand("replay", "Re-apply a RunRecord and re-run its match");
  cReplay->add_option("--record", recordPath, "RunRecord JSON written by play")->required();
  addOutput(cReplay, out);

  auto* cExtract = app.add_subcommand("extract", "Perfect-set tree of I's replies");
  cExtract->add_option("--pI", pI, "Strategy for I");
  cExtract->add_option("--body", bodySpec);
  cExtract->add_option("--target", targetSpec);
  cExtract->add_option("--depth", depth, "Tree depth (0..12)");
  cExtract->add_option("--seed", seed, "Seed")->required();
  addOutput(cExtract, out);

  // cones
  std::string coloredPath;
  double angle = 0.7853981633974483, radius = 0.25;
  int smallK = 1;
  std::string mode = "fixpoint";
  auto* cThin = app.add_subcommand("thin", "Partial-homogeneity thinning of a colored point set");
  cThin->add_option("--in", coloredPath, "ColoredPointSet JSON");
  cThin->add_option("--target", targetSpec, "Color pairs of this target by planar cones instead");
  cThin->add_option("--angle", angle, "Largest cone angle for --target");
  cThin->add_option("--r", radius, "Radius r for --target");
  cThin->add_option("--k", smallK, "Smallness threshold k for --target");
  cThin->add_option("--mode", mode, "fixpoint | both")->check(CLI::IsMember({"fixpoint", "both"}));
  cThin->add_option("--seed", seed, "Seed for random targets");
  addOutput(cThin, out);

  // service
  std::string host = "127.0.0.1", snapshots;
  int port = 8080;
  double budget = 5.0;
  auto* cServe = app.add_subcommand("serve", "HTTP+JSON session service");
  cServe->add_option("--host", host);
  cServe->add_option("--port", port);
  cServe->add_option("--snapshots", snapshots, "Directory for per-session snapshots");
  cServe->add_option("--budget", budget, "Machine reply budget in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (cBody->parsed()) {
      out.requireJsonOrSvg(false);
      if (genName.empty() == inPath.empty()) throw InvalidArgument("pass exactly one of --gen and --in");
      if (!inPath.empty()) {
        out.json(io::toJson(fromFile(inPath, [](const Json& j) { return io::bodyFromJson(j); })));
      } else if (genName.rfind("noncoplanar-", 0) == 0) {
        auto nc = gen::nonCoplanarHull(std::stoi(genName.substr(12)));
        Json j = io::toJson(nc.body);
        Json segs = Json::array();
        double minDet = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < nc.segments.size(); ++i) {
          segs.push_back({io::toJson(nc.segments[i].x), io::toJson(nc.segments[i].y)});
          for (size_t k = i + 1; k < nc.segments.size(); ++k)
            minDet = std::min(minDet, std::abs(gen::coplanarityDet(nc.segments[i], nc.segments[k])));
        }
        out.json({{"body", j}, {"segments", segs}, {"minAbsCoplanarityDet", minDet}});
      } else {
        out.json(io::toJson(loadBody(genName, seed)));
      }
    } else if (cTarget->parsed()) {
      out.requireJsonOrSvg(false);
      if (genName.empty() == inPath.empty()) throw InvalidArgument("pass exactly one of --gen and --in");
      TargetSet t = inPath.empty() ? loadTarget(genName, seed)
                                   : fromFile(inPath, [](const Json& j) { return io::targetFromJson(j); });
      if (epsOverride) t.eps = *epsOverride;
      t.validate();
      out.json(io::toJson(t));
    } else if (cDelta->parsed()) {
      out.requireJsonOrSvg(false);
      ConvexBody P = loadBody(bodySpec, seed);
      DeltaResult d = pointStr.empty() ? deltaGlobal(P) : deltaAt(P, io::vecFromJson(io::parse(pointStr)));
      out.json({{"value", d.value},
                {"uncertainty", d.uncertainty},
                {"point", d.point.size() ? io::toJson(d.point) : Json(nullptr)},
                {"direction", d.direction.size() ? io::toJson(d.direction) : Json(nullptr)},
                {"found", d.found}});
    } else if (cMinhull->parsed()) {
      out.requireJsonOrSvg(false);
      ConvexBody P = loadBody(bodySpec, seed);
      Homothet h = minEnclosingHomothet(P, parsePoints(pointsStr));
      out.json(io::toJson(h));
    } else if (cMaxchord->parsed()) {
      out.requireJsonOrSvg(false);
      ConvexBody P = loadBody(bodySpec, seed);
      ChordResult c = maxChord(P, io::vecFromJson(io::parse(dirStr)));
      out.json({{"length", c.length}, {"x", io::toJson(c.chord.x)}, {"y", io::toJson(c.chord.y)}});
    } else if (cFaces->parsed()) {
      out.requireJsonOrSvg(false);
      out.json(io::toJson(buildFaceLattice(loadBody(bodySpec, seed))));
    } else if (cDerive->parsed()) {
      ConvexBody P = loadBody(bodySpec, seed);
      TargetSet t = loadTarget(targetSpec, seed);
      if (epsOverride) t.eps = *epsOverride;
      requireSameDim(P, t);
      if (!copyStr.empty()) {
        Homothet q = io::homothetFromJson(io::parse(copyStr));
        GoodCopyCertificate c = isGoodCopy(P, q, t, eta);
        if (out.format == "svg") out.emit(svg::renderGoodCopy(P, t, c));
        else out.json(io::toJson(c));
      } else {
        out.requireJsonOrSvg(false);
        StepOptions so;
        so.eta = eta;
        out.json(io::toJson(derivativeStep(P, t, so)));
      }
    } else if (cRank->parsed()) {
      ConvexBody P = loadBody(bodySpec, seed);
      TargetSet t = loadTarget(targetSpec, seed);
      if (epsOverride) t.eps = *epsOverride;
      requireSameDim(P, t);
      StepOptions so;
      so.eta = eta;
      DerivativeTrace tr = rankTrace(P, t, maxStages, so);
      if (out.format == "svg") out.emit(svg::renderTrace(P, t, tr));
      else if (fullTrace) out.json(io::toJson(tr));
      else out.json({{"rank", tr.rank}, {"fixpointSize", tr.fixpointSize()}});
    } else if (cPlay->parsed()) {
      auto P = std::make_shared<const ConvexBody>(loadBody(bodySpec, seed));
      TargetSet t = loadTarget(targetSpec, seed);
      requireSameDim(*P, t);
      if (horizon < 1) throw InvalidArgument("--horizon must be positive");
      Strategy sI = catalog::strategy(pI, *P, t);
      Strategy sII = catalog::strategy(pII, *P, t);
      auto document = [&](const RunRecord& r) {
        Json j = io::toJson(r);
        j["body"] = io::toJson(*P);
        j["target"] = io::toJson(t);
        return j;
      };
      if (tournament > 0) {
        out.requireJsonOrSvg(false);
        // Matches fan out to workers; results land by match index.
        std::vector<Json> results(static_cast<size_t>(tournament));
        int nw = workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failMu;
        for (int w = 0; w < std::min(nw, tournament); ++w)
          pool.emplace_back([&] {
            for (int i = next++; i < tournament; i = next++) {
              try {
                results[i] = document(playMatch(sI, sII, P, t, horizon, *seed + static_cast<std::uint64_t>(i)));
              } catch (...) {
                std::lock_guard lk(failMu);
                if (!failure) failure = std::current_exception();
              }
            }
          });
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
        out.json(Json(results));
      } else {
        RunRecord r = playMatch(sI, sII, P, t, horizon, *seed);
        if (out.format == "svg") out.emit(svg::renderRun(*P, t, r));
        else out.json(document(r));
      }
    } else if (cReplay->parsed()) {
      out.requireJsonOrSvg(false);
      Json doc = io::parse(readFile(recordPath));
      RunRecord r = fromFile(recordPath, [](const Json& j) { return io::runRecordFromJson(j); });
      if (!doc.contains("body") || !doc.contains("target"))
        throw io::JsonError(recordPath + "#/body", "record lacks the embedded body and target");
      auto P = std::make_shared<const ConvexBody>(io::bodyFromJson(doc["body"]));
      TargetSet t = io::targetFromJson(doc["target"]);
      GameState g = replay(P, t, r);
      bool outcomeMatches = g.survivors() == r.survivors && g.certifiedRound() == r.certifiedRound;
      RunRecord again = playMatch(catalog::strategy(r.pI, *P, t), catalog::strategy(r.pII, *P, t), P, t, r.horizon,
                                  r.seed);
      Json rerun = io::toJson(again);
      rerun["body"] = doc["body"];
      rerun["target"] = doc["target"];
      bool bytesMatch = io::dump(rerun) == io::dump(doc);
      out.json({{"movesReplayed", r.moves.size()},
                {"outcomeMatches", outcomeMatches},
                {"bytesMatch", bytesMatch},
                {"status", statusName(r.status)}});
      if (!outcomeMatches || !bytesMatch) return kExitValidation;
    } else if (cExtract->parsed()) {
      out.requireJsonOrSvg(false);
      auto P = std::make_shared<const ConvexBody>(loadBody(bodySpec, seed));
      TargetSet t = loadTarget(targetSpec, seed);
      requireSameDim(*P, t);
      ExtractResult r = perfectSetExtract(catalog::strategy(pI, *P, t), P, t, depth, *seed);
      out.json(io::toJson(r));
    } else if (cThin->parsed()) {
      out.requireJsonOrSvg(false);
      ColoredPointSet data;
      if (!coloredPath.empty()) {
        data = fromFile(coloredPath, [](const Json& j) { return io::coloredFromJson(j); });
      } else {
        TargetSet t = loadTarget(targetSpec, seed);
        if (t.dim != 2) throw InvalidArgument("cone coloring needs a planar target");
        data = ColoredPointSet::fromCones(t.points, refinedFamily2D(angle), radius, smallK);
      }
      ThinningMode m = mode == "both" ? ThinningMode::BothSides : ThinningMode::Fixpoint;
      ThinningResult r = thinningHomogeneous(data, m);
      Json j = io::toJson(r);
      j["verified"] = r.success && verifyPartialHomogeneity(data, r.B, r.color, m, &r.reference);
      out.json(j);
    } else if (cServe->parsed()) {
      service::Options so;
      so.budgetSeconds = budget;
      if (!snapshots.empty()) so.snapshotDir = snapshots;
      service::SessionManager mgr(so);
      int restored = mgr.loadSnapshots();
      httplib::Server server;
      service::installRoutes(server, mgr);
      std::cerr << "serving on " << host << ":" << port << " (" << restored << " sessions restored)\n";
      if (!server.listen(host, port)) throw InvalidArgument("cannot listen on " + host + ":" + std::to_string(port));
    }
  } catch (const io::JsonError& e) {
    std::cerr << io::dump({{"error", e.what()}, {"pointer", e.pointer()}});
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    std::cerr << io::dump({{"error", e.what()}});
    return kExitValidation;
  } catch (const PreconditionViolation& e) {
    Json j = {{"error", e.what()}};
    if (e.witness()) j["witness"] = io::toJson(*e.witness());
    std::cerr << io::dump(j);
    return kExitValidation;
  } catch (const ResourceLimit& e) {
    std::cerr << io::dump({{"error", e.what()}});
    return kExitResource;
  } catch (const std::logic_error& e) {
    std::cerr << io::dump({{"error", e.what()}});
    return kExitValidation;
  }
  return 0;
}
