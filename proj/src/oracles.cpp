#include "qgames/oracles.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qgames/errors.hpp"

namespace qgames {

std::optional<std::size_t> st_distance(const Structure& s) {
  if (s.vocabulary().constants().size() != 2 || s.vocabulary().relations().size() != 1)
    throw InvalidArgument("st_distance needs a {E; s, t} structure");
  const Element src = s.constant(0), dst = s.constant(1);
  std::vector<std::vector<Element>> out(s.size());
  for (const Tuple& e : s.tuples(0)) out[e[0]].push_back(e[1]);
  std::vector<std::size_t> dist(s.size(), SIZE_MAX);
  std::vector<Element> queue{src};
  dist[src] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (Element v : out[queue[i]])
      if (dist[v] == SIZE_MAX) {
        dist[v] = dist[queue[i]] + 1;
        queue.push_back(v);
      }
  if (dist[dst] == SIZE_MAX) return std::nullopt;
  return dist[dst];
}

void for_each_st_graph(std::size_t n, bool loops, bool same_st,
                       const std::function<void(const Structure&)>& visit) {
  if (n == 0 || (!same_st && n < 2)) return;
  std::vector<std::pair<Element, Element>> cells;
  std::vector<std::vector<int>> cell_of(n, std::vector<int>(n, -1));
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (loops || a != b) {
        cell_of[a][b] = static_cast<int>(cells.size());
        cells.emplace_back(a, b);
      }
  if (cells.size() > 25) throw ResourceLimit("st-graph-cells", "too many edge cells to enumerate");
  const std::size_t fixed = std::min<std::size_t>(same_st ? 1 : 2, n);
  // Cell permutation induced by every permutation of the free nodes.
  std::vector<std::vector<int>> cell_perms;
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), Element{0});
  while (std::next_permutation(perm.begin() + fixed, perm.end())) {
    std::vector<int> image(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      image[c] = cell_of[perm[cells[c].first]][perm[cells[c].second]];
    cell_perms.push_back(std::move(image));
  }
  const std::vector<Element> constants{0, static_cast<Element>(same_st ? 0 : 1)};
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cells.size()); ++mask) {
    bool least = true;
    for (const auto& image : cell_perms) {
      std::uint32_t moved = 0;
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (mask >> c & 1) moved |= std::uint32_t{1} << image[c];
      if (moved < mask) {
        least = false;
        break;
      }
    }
    if (!least) continue;
    std::vector<Tuple> edges;
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (mask >> c & 1) edges.push_back({cells[c].first, cells[c].second});
    visit(Structure(Vocabulary::graph_st(), n, {std::move(edges)}, constants));
  }
}

}  // namespace qgames
