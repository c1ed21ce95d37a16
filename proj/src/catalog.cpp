#include "nobeta/catalog.hpp"

#include "nobeta/generators.hpp"

#include <charconv>

namespace nobeta::catalog {

namespace {

// Splits "head-a-b" into head and numeric arguments.
struct Parsed {
  std::string head;
  std::vector<std::string> args;
};

Parsed split(const std::string& name) {
  Parsed p;
  size_t start = 0;
  bool first = true;
  while (true) {
    size_t dash = name.find('-', start);
    std::string part = name.substr(start, dash == std::string::npos ? std::string::npos : dash - start);
    if (first) p.head = part;
    else p.args.push_back(part);
    first = false;
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  return p;
}

int toInt(const std::string& s, const std::string& name) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidArgument("bad integer '" + s + "' in " + name);
  return v;
}

double toDouble(const std::string& s, const std::string& name) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("bad number '" + s + "' in " + name);
}

void arity(const Parsed& p, size_t n, const std::string& name) {
  if (p.args.size() != n) throw InvalidArgument("'" + name + "' expects " + std::to_string(n) + " argument(s)");
}

}  // namespace

ConvexBody body(const std::string& name, std::uint64_t seed) {
  Parsed p = split(name);
  if (name == "disk") return gen::ball(2);
  if (name == "square") return gen::square();
  if (name == "cube") return gen::cube();
  if (name == "tetrahedron") return gen::tetrahedron();
  if (name == "prism") return gen::triangularPrism();
  if (p.head == "ball") {
    arity(p, 1, name);
    return gen::ball(toInt(p.args[0], name));
  }
  if (p.head == "ngon") {
    arity(p, 1, name);
    return gen::regularPolygon(toInt(p.args[0], name));
  }
  if (p.head == "ellipse") {
    arity(p, 2, name);
    return gen::ellipse(toDouble(p.args[0], name), toDouble(p.args[1], name));
  }
  if (p.head == "random") {
    arity(p, 2, name);
    return gen::randomPolytope(seed, toInt(p.args[0], name), toInt(p.args[1], name));
  }
  if (p.head == "noncoplanar") {
    arity(p, 1, name);
    return gen::nonCoplanarHull(toInt(p.args[0], name)).body;
  }
  throw InvalidArgument("unknown body '" + name + "'");
}

TargetSet target(const std::string& name, std::uint64_t seed) {
  Parsed p = split(name);
  if (p.head == "circle") {
    arity(p, 1, name);
    return gen::circle(toInt(p.args[0], name));
  }
  if (p.head == "segment") {
    arity(p, 1, name);
    return gen::segment(toInt(p.args[0], name), vec({-0.5, 0.0}), vec({0.5, 0.0}));
  }
  if (p.head == "cantor") {
    arity(p, 1, name);
    return gen::cantorDust(toInt(p.args[0], name));
  }
  if (p.head == "scatter") {
    arity(p, 1, name);
    return gen::scatter(toInt(p.args[0], name), seed);
  }
  if (p.head == "sequence") {
    arity(p, 1, name);
    return gen::convergentSequence(toInt(p.args[0], name), vec({0.0, 0.0}), vec({1.0, 0.0}), 0.6, 0.02);
  }
  if (p.head == "decorated") {
    arity(p, 1, name);
    return gen::decoratedCircle(toInt(p.args[0], name));
  }
  throw InvalidArgument("unknown target '" + name + "'");
}

Strategy strategy(const std::string& tag, const ConvexBody& P, const TargetSet& target) {
  if (tag == "enumerate") return enumerateDeleter();
  if (tag == "random") return randomLegal();
  if (tag == "goodcopy") return goodCopyPlayer(P, target);
  if (tag == "rank") return rankReducer(P, target);
  throw InvalidArgument("unknown strategy '" + tag + "' (enumerate, random, goodcopy, rank)");
}

std::vector<std::string> bodyNames() {
  return {"disk", "ball-D", "square", "cube", "tetrahedron", "prism", "ngon-N", "ellipse-A-B", "random-D-N",
          "noncoplanar-M"};
}

std::vector<std::string> targetNames() {
  return {"circle-N", "segment-N", "cantor-D", "scatter-N", "sequence-N", "decorated-N"};
}

}  // namespace nobeta::catalog
