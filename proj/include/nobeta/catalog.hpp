#pragma once

#include "nobeta/body.hpp"
#include "nobeta/game.hpp"
#include "nobeta/target.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nobeta::catalog {

// Body names: disk, ball-D, square, cube, tetrahedron, prism, ngon-N,
// ellipse-A-B, random-D-N (uses seed), noncoplanar-M.
ConvexBody body(const std::string& name, std::uint64_t seed = 0);
// Target names: circle-N, segment-N, cantor-D, scatter-N (uses seed),
// sequence-N, decorated-N.
TargetSet target(const std::string& name, std::uint64_t seed = 0);

// Strategy tags: enumerate, random, goodcopy, rank.
Strategy strategy(const std::string& tag, const ConvexBody& P, const TargetSet& target);

std::vector<std::string> bodyNames();
std::vector<std::string> targetNames();

}  // namespace nobeta::catalog
