#include <algorithm>
#include <map>

#include "qgames/errors.hpp"
#include "qgames/game.hpp"

namespace qgames {

namespace {

// ------------------------------------------------ generic E-F position search

// A position is the set of pinned pairs (constants included).  Spoiler
// wins once the pairs stop being a partial isomorphism.
class EfSearch {
 public:
  EfSearch(const Structure& a, const Structure& b) : a_(a), b_(b) {}

  using Pair = std::pair<Element, Element>;
  using Position = std::vector<Pair>;  // sorted, unique

  /// Adding (x, y) to a partial isomorphism keeps it one.
  bool extends(const Position& p, Element x, Element y) const {
    for (const auto& [u, v] : p)
      if ((u == x) != (v == y)) return false;
    // Every tuple over p's elements plus the new pair that mentions it.
    std::vector<Pair> terms = p;
    terms.push_back({x, y});
    const std::size_t m = terms.size();
    const auto& rels = a_.vocabulary().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const std::size_t ar = rels[r].arity;
      std::vector<std::size_t> idx(ar, 0);
      std::vector<Element> ta(ar), tb(ar);
      while (true) {
        bool mentions = false;
        for (std::size_t i = 0; i < ar; ++i) {
          mentions = mentions || idx[i] == m - 1;
          ta[i] = terms[idx[i]].first;
          tb[i] = terms[idx[i]].second;
        }
        if (mentions && a_.holds(r, ta) != b_.holds(r, tb)) return false;
        std::size_t pos = ar;
        while (pos > 0 && ++idx[pos - 1] == m) idx[--pos] = 0;
        if (pos == 0) break;
      }
    }
    return true;
  }

  static Position with(const Position& p, Element x, Element y) {
    Position q = p;
    Pair pr{x, y};
    auto it = std::lower_bound(q.begin(), q.end(), pr);
    if (it == q.end() || *it != pr) q.insert(it, pr);
    return q;
  }

  /// Spoiler wins from partial isomorphism p with `rounds` left; `first`
  /// receives a winning move (side, element) when requested.
  bool wins(const Position& p, std::size_t rounds, std::optional<std::pair<Side, Element>>* first) {
    if (rounds == 0) return false;
    auto key = std::make_pair(rounds, p);
    if (!first) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    bool result = false;
    for (Side side : {Side::A, Side::B}) {
      const Structure& mine = side == Side::A ? a_ : b_;
      const Structure& theirs = side == Side::A ? b_ : a_;
      for (Element e = 0; e < mine.size() && !result; ++e) {
        bool pinned = false;
        for (const auto& pr : p) pinned = pinned || (side == Side::A ? pr.first : pr.second) == e;
        if (pinned) continue;  // Duplicator answers with the existing partner
        bool all_lose = true;
        for (Element f = 0; f < theirs.size() && all_lose; ++f) {
          const Element x = side == Side::A ? e : f;
          const Element y = side == Side::A ? f : e;
          if (!extends(p, x, y)) continue;
          if (!wins(with(p, x, y), rounds - 1, nullptr)) all_lose = false;
        }
        if (all_lose) {
          result = true;
          if (first) *first = std::make_pair(side, e);
        }
      }
      if (result) break;
    }
    memo_[key] = result;
    return result;
  }

 private:
  const Structure& a_;
  const Structure& b_;
  std::map<std::pair<std::size_t, Position>, bool> memo_;
};

// -------------------------------------------------- linear-order gap search

// Gaps between consecutive distinct pins, including both ends.
using Gaps = std::vector<std::size_t>;

class GapSearch {
 public:
  explicit GapSearch(bool cap) : cap_(cap) {}

  Gaps capped(const Gaps& g, std::size_t rounds) const {
    if (!cap_) return g;
    const std::size_t c = rounds >= 63 ? ~std::size_t{0} : (std::size_t{1} << rounds) - 1;
    Gaps out = g;
    for (auto& x : out) x = std::min(x, c);
    return out;
  }

  static Gaps split(const Gaps& g, std::size_t i, std::size_t j) {
    Gaps out;
    out.reserve(g.size() + 1);
    out.insert(out.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(i));
    out.push_back(j);
    out.push_back(g[i] - 1 - j);
    out.insert(out.end(), g.begin() + static_cast<std::ptrdiff_t>(i) + 1, g.end());
    return out;
  }

  bool wins(const Gaps& ga_in, const Gaps& gb_in, std::size_t rounds,
            std::optional<std::tuple<Side, std::size_t, std::size_t>>* first) {
    if (rounds == 0) return false;
    const Gaps ga = capped(ga_in, rounds);
    const Gaps gb = capped(gb_in, rounds);
    if (ga == gb) return false;
    auto key = std::make_tuple(rounds, ga, gb);
    if (!first) {
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    bool result = false;
    for (Side side : {Side::A, Side::B}) {
      const Gaps& mine = side == Side::A ? ga : gb;
      const Gaps& theirs = side == Side::A ? gb : ga;
      for (std::size_t i = 0; i < mine.size() && !result; ++i)
        for (std::size_t j = 0; j < mine[i] && !result; ++j) {
          const Gaps m2 = split(mine, i, j);
          bool all_lose = true;
          for (std::size_t k = 0; k < theirs[i] && all_lose; ++k) {
            const Gaps t2 = split(theirs, i, k);
            const bool sub = side == Side::A ? wins(m2, t2, rounds - 1, nullptr)
                                             : wins(t2, m2, rounds - 1, nullptr);
            if (!sub) all_lose = false;
          }
          if (all_lose) {
            result = true;
            if (first) *first = std::make_tuple(side, i, j);
          }
        }
      if (result) break;
    }
    memo_[key] = result;
    return result;
  }

 private:
  bool cap_;
  std::map<std::tuple<std::size_t, Gaps, Gaps>, bool> memo_;
};

struct OrderView {
  std::vector<std::size_t> rank;      // element -> position
  std::vector<Element> at;            // position -> element
  std::vector<std::size_t> distinct;  // sorted distinct pin positions
  Gaps gaps;
};

OrderView order_view(const LabeledStructure& x) {
  OrderView v;
  is_linear_order(x.structure(), &v.rank);
  v.at.resize(v.rank.size());
  for (Element e = 0; e < v.rank.size(); ++e) v.at[v.rank[e]] = e;
  for (Element p : x.pins) v.distinct.push_back(v.rank[p]);
  std::sort(v.distinct.begin(), v.distinct.end());
  v.distinct.erase(std::unique(v.distinct.begin(), v.distinct.end()), v.distinct.end());
  std::size_t prev = 0;
  for (std::size_t p : v.distinct) {
    v.gaps.push_back(p - prev);
    prev = p + 1;
  }
  v.gaps.push_back(x.structure().size() - prev);
  return v;
}

bool both_orders(const LabeledStructure& a, const LabeledStructure& b) {
  return a.structure().vocabulary() == Vocabulary::order() && is_linear_order(a.structure()) &&
         is_linear_order(b.structure());
}

}  // namespace

GameOutcome solve_ef_generic(const LabeledStructure& a, const LabeledStructure& b,
                             std::size_t r) {
  if (!(a.structure().vocabulary() == b.structure().vocabulary()))
    throw InvalidArgument("vocabulary mismatch");
  if (a.pins.size() != b.pins.size()) throw InvalidArgument("pin-count mismatch");
  GameOutcome out;
  if (!partial_isomorphism(a, b)) {
    out.winner = Player::Spoiler;
    return out;
  }
  EfSearch search(a.structure(), b.structure());
  EfSearch::Position p;
  auto add = [&](Element x, Element y) { p = EfSearch::with(p, x, y); };
  for (std::size_t i = 0; i < a.pins.size(); ++i) add(a.pins[i], b.pins[i]);
  for (std::size_t i = 0; i < a.structure().constants().size(); ++i)
    add(a.structure().constant(i), b.structure().constant(i));
  std::optional<std::pair<Side, Element>> first;
  const bool win = search.wins(p, r, &first);
  out.winner = win ? Player::Spoiler : Player::Duplicator;
  if (win && first) out.witness = SpoilerMove{first->first, {first->second}};
  return out;
}

GameOutcome solve_ef(const LabeledStructure& a, const LabeledStructure& b, std::size_t r,
                     const MsOptions& opts) {
  if (!(a.structure().vocabulary() == b.structure().vocabulary()))
    throw InvalidArgument("vocabulary mismatch");
  if (a.pins.size() != b.pins.size()) throw InvalidArgument("pin-count mismatch");
  if (!opts.linear_order_fast_path || !both_orders(a, b)) return solve_ef_generic(a, b, r);
  GameOutcome out;
  if (!partial_isomorphism(a, b)) {
    out.winner = Player::Spoiler;
    return out;
  }
  const OrderView va = order_view(a), vb = order_view(b);
  GapSearch search(true);
  std::optional<std::tuple<Side, std::size_t, std::size_t>> first;
  const bool win = search.wins(va.gaps, vb.gaps, r, &first);
  out.winner = win ? Player::Spoiler : Player::Duplicator;
  if (win && first) {
    const auto [side, gap, offset] = *first;
    const OrderView& v = side == Side::A ? va : vb;
    const std::size_t start = gap == 0 ? 0 : v.distinct[gap - 1] + 1;
    out.witness = SpoilerMove{side, {v.at[start + offset]}};
  }
  return out;
}

GameOutcome solve_ef(const Structure& a, const Structure& b, std::size_t r,
                     const MsOptions& opts) {
  return solve_ef(LabeledStructure(a), LabeledStructure(b), r, opts);
}

bool ef_equivalent(const LabeledStructure& a, const LabeledStructure& b, std::size_t r) {
  if (!(a.structure().vocabulary() == b.structure().vocabulary()))
    throw InvalidArgument("vocabulary mismatch");
  if (a.pins.size() != b.pins.size()) throw InvalidArgument("pin-count mismatch");
  TypeTable table(a.structure().vocabulary());
  return table.type_of(a, r) == table.type_of(b, r);
}

}  // namespace qgames
