#pragma once

// Independent reference computations used to check generated sentences.

#include <cstddef>
#include <functional>
#include <optional>

#include "qgames/structure.hpp"

namespace qgames {

/// Shortest directed s-t distance (BFS) in a {E; s, t} structure; nullopt
/// when t is unreachable.
std::optional<std::size_t> st_distance(const Structure& s);

/// Calls `visit` with one representative per orbit of the {E; s, t}
/// structures on n nodes under permutations of the nodes other than s and
/// t.  s = 0, and t = 1 (distinct) or t = 0 (`same_st`).  `loops` admits
/// self-loops.  Needs n(n-1) (or n^2) <= 25 edge cells.
void for_each_st_graph(std::size_t n, bool loops, bool same_st,
                       const std::function<void(const Structure&)>& visit);

}  // namespace qgames
