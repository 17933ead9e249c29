#include "qgames/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"

namespace qgames {

namespace {

Term x(std::size_t i) { return Term::var("x" + std::to_string(i)); }

// A prenex sentence over x1..xq with x_i bound by the i-th quantifier.
struct Prenex {
  std::vector<bool> universal;
  Formula matrix;

  std::size_t size() const { return universal.size(); }
  std::string signature() const {
    std::string s;
    for (bool u : universal) s += u ? "∀" : "∃";
    return s;
  }
  std::vector<std::size_t> existentials() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < universal.size(); ++i)
      if (!universal[i]) out.push_back(i + 1);
    return out;
  }
  Formula sentence() const {
    Formula f = matrix;
    for (std::size_t i = universal.size(); i-- > 0;)
      f = universal[i] ? forall("x" + std::to_string(i + 1), f)
                       : exists("x" + std::to_string(i + 1), f);
    return f;
  }
};

// Renames x_i to x_{i+by} in the matrix.
Prenex shifted(const Prenex& p, std::size_t by) {
  std::map<std::string, std::string> mapping;
  for (std::size_t i = 1; i <= p.size(); ++i)
    mapping["x" + std::to_string(i)] = "x" + std::to_string(i + by);
  return {p.universal, rename_free(p.matrix, mapping)};
}

// The matrix of p relativized to the elements on one side of `pivot`, with
// the quantifiers left pulled out: Qx_i becomes Qx_i (side(x_i) -> ...) for
// a universal and Qx_i (side(x_i) & ...) for an existential.  `p` must
// already use the variables it will be bound to (x_{offset+1}, ...).
Formula relativized_matrix(const Prenex& p, std::size_t offset, const Term& pivot,
                           Direction dir) {
  Formula acc = p.matrix;
  for (std::size_t i = p.size(); i-- > 0;) {
    const Term xi = x(offset + i + 1);
    Formula side = dir == Direction::Above ? lt(pivot, xi) : lt(xi, pivot);
    acc = p.universal[i] ? implies(side, acc) : land({side, acc});
  }
  return acc;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

// "Some x1 has an S-order on each side."  S must be ∀-led with at least two
// existentials; the x2 = x1 clause makes both sides non-empty.
Prenex both(const Prenex& s) {
  require(!s.universal.empty() && s.universal[0] && s.existentials().size() >= 2,
          "both() needs a ∀-led sentence with two existentials");
  const Prenex inner = shifted(s, 1);
  const Term p = x(1), a = x(2);
  const auto ex = inner.existentials();
  // Positions are 1-based within S; x1 is the new pivot.
  const Term first = x(ex.front() + 1), last = x(ex.back() + 1);
  Prenex out;
  out.universal = {false};
  out.universal.insert(out.universal.end(), s.universal.begin(), s.universal.end());
  out.matrix = land({implies(lt(a, p), relativized_matrix(inner, 1, p, Direction::Below)),
                     implies(lt(p, a), relativized_matrix(inner, 1, p, Direction::Above)),
                     implies(eq(a, p), land({lt(p, first), lt(last, p)}))});
  return out;
}

// "Every x1 has an S-order on one side."  S must be ∃-led; its first
// variable picks the side, so the shared prefix is sound.
Prenex either(const Prenex& s) {
  require(!s.universal.empty() && !s.universal[0], "either() needs an ∃-led sentence");
  const Prenex inner = shifted(s, 1);
  const Term p = x(1);
  Prenex out;
  out.universal = {true};
  out.universal.insert(out.universal.end(), s.universal.begin(), s.universal.end());
  out.matrix = lor({relativized_matrix(inner, 1, p, Direction::Above),
                    relativized_matrix(inner, 1, p, Direction::Below)});
  return out;
}

// "Every x1 has an element above it, or a U-tree below it."  U is ∃-led.
Prenex lift(const Prenex& u) {
  require(!u.universal.empty() && !u.universal[0], "lift() needs an ∃-led sentence");
  const Prenex inner = shifted(u, 1);
  Prenex out;
  out.universal = {true};
  out.universal.insert(out.universal.end(), u.universal.begin(), u.universal.end());
  out.matrix = lor({lt(x(1), x(2)), relativized_matrix(inner, 1, x(1), Direction::Below)});
  return out;
}

// "Some x1 has a P-order above it and a U-tree below it."  P and U share
// one ∀-led signature with at least two existentials.
Prenex tree_step(const Prenex& order, const Prenex& tree) {
  require(order.universal == tree.universal, "tree_step() needs equal prefixes");
  require(!order.universal.empty() && order.universal[0] && order.existentials().size() >= 2,
          "tree_step() needs a ∀-led prefix with two existentials");
  const Prenex above = shifted(order, 1), below = shifted(tree, 1);
  const Term p = x(1), a = x(2);
  const auto ex = order.existentials();
  const Term first = x(ex.front() + 1), last = x(ex.back() + 1);
  Prenex out;
  out.universal = {false};
  out.universal.insert(out.universal.end(), order.universal.begin(), order.universal.end());
  out.matrix = land({implies(lt(p, a), relativized_matrix(above, 1, p, Direction::Above)),
                     implies(lt(a, p), relativized_matrix(below, 1, p, Direction::Below)),
                     implies(eq(a, p), land({lt(p, first), lt(last, p)}))});
  return out;
}

// ∀x1 ∃x2 ∃x3 (x1 < x2 < x3 ∨ x2 < x3 < x1): two elements on one side.
Prenex phi3_forall() {
  return {{true, false, false},
          lor({chain_lt({x(1), x(2), x(3)}), chain_lt({x(2), x(3), x(1)})})};
}

// ∃x1 ∀x2 ∃x3: two elements above x1 and one below (trees and orders).
Prenex phi3_exists() {
  return {{false, true, false},
          land({implies(lt(x(2), x(1)), lt(x(1), x(3))),
                implies(lt(x(1), x(2)), land({neq(x(3), x(2)), lt(x(1), x(3))})),
                implies(eq(x(2), x(1)), lt(x(3), x(1)))})};
}

// ∃x1 ∀x2 ∃x3 ∃x4 with a Φ3∀-order on each side of x1: threshold 9.
Prenex c4_sentence() {
  return {{false, true, false, false},
          land({implies(lt(x(2), x(1)), lor({chain_lt({x(2), x(3), x(4), x(1)}),
                                             chain_lt({x(3), x(4), x(2), x(1)})})),
                implies(lt(x(1), x(2)), lor({chain_lt({x(1), x(2), x(3), x(4)}),
                                             chain_lt({x(1), x(3), x(4), x(2)})})),
                implies(eq(x(2), x(1)), land({lt(x(1), x(3)), lt(x(4), x(1))}))})};
}

// ∀x1 ∃x2 ∀x3 ∃x4: every x1 has five elements on one side, so the
// threshold is 10.  On the upper side x2 sits above x1 with at least two
// elements strictly between them and at least two above x2; the lower
// side is the mirror image.
Prenex phi4_optimal() {
  auto side = [](bool up) {
    auto between = [&](const Term& v) {
      return up ? chain_lt({x(1), v, x(2)}) : chain_lt({x(2), v, x(1)});
    };
    auto beyond = [&](const Term& v) { return up ? lt(x(2), v) : lt(v, x(2)); };
    return land({up ? lt(x(1), x(2)) : lt(x(2), x(1)),
                 implies(between(x(3)), land({between(x(4)), neq(x(4), x(3))})),
                 implies(beyond(x(3)), land({beyond(x(4)), neq(x(4), x(3))})),
                 implies(eq(x(3), x(1)), between(x(4))),
                 implies(eq(x(3), x(2)), beyond(x(4)))});
  };
  return {{true, false, true, false}, lor({side(true), side(false)})};
}

Prenex lo_forall_prenex(std::size_t r);

Prenex lo_exists_prenex(std::size_t r) {
  if (r == 4) return c4_sentence();
  return both(lo_forall_prenex(r - 1));
}

Prenex lo_forall_prenex(std::size_t r) {
  if (r == 3) return phi3_forall();
  return either(lo_exists_prenex(r - 1));
}

Prenex lo_optimal_prenex(std::size_t r) {
  switch (r) {
    case 1: return {{false}, eq(x(1), x(1))};
    case 2: return {{true, false}, lor({lt(x(1), x(2)), lt(x(2), x(1))})};
    case 3: return phi3_forall();
    case 4: return phi4_optimal();
    default: break;
  }
  const Prenex prev = lo_optimal_prenex(r - 1);
  return r % 2 == 1 ? both(prev) : either(prev);
}

// ∀-led order sentence with m quantifiers and threshold g_forall(m) (odd m)
// or g(m) (even m >= 4).
Prenex order_forall_prenex(std::size_t m) {
  return m % 2 == 1 ? lo_forall_prenex(m) : lo_optimal_prenex(m);
}

Prenex tree_prenex(std::size_t r);

Prenex tree_forall_prenex(std::size_t r) {
  if (r == 3)
    return {{true, false, false}, lor({lt(x(1), x(2)), chain_lt({x(2), x(3), x(1)})})};
  return lift(tree_prenex(r - 1));
}

Prenex tree_prenex(std::size_t r) {
  switch (r) {
    case 2: return {{false, false}, lt(x(1), x(2))};
    case 3: return phi3_exists();
    case 4:
      return {{false, true, false, false},
              land({implies(lt(x(1), x(2)), lor({chain_lt({x(2), x(3), x(4)}),
                                                 chain_lt({x(1), x(3), x(4), x(2)})})),
                    implies(lt(x(2), x(1)), lor({chain_lt({x(2), x(3), x(1)}),
                                                 chain_lt({x(4), x(3), x(2)})})),
                    implies(eq(x(2), x(1)), land({lt(x(3), x(1)), lt(x(1), x(4))}))})};
    default: break;
  }
  return tree_step(order_forall_prenex(r - 1), tree_forall_prenex(r - 1));
}

GeneratedSentence make(const Prenex& p, Family family, std::size_t param,
                       std::optional<BigInt> threshold) {
  return {p.sentence(), family, param, std::move(threshold)};
}

BigInt pow_big(unsigned base, std::size_t e) {
  BigInt v = 1;
  for (std::size_t i = 0; i < e; ++i) v *= base;
  return v;
}

Formula edge(const Term& a, const Term& b) { return rel("E", {a, b}); }

Formula conj(std::vector<Formula> fs) { return fs.size() == 1 ? fs[0] : land(std::move(fs)); }

// Path from `from` to `to` through `mids`, shortened to `length` edges by
// dropping the last intermediate nodes.
Formula bridge(const Term& from, const Term& to, const std::vector<Term>& mids,
               std::size_t length) {
  std::vector<Term> nodes{from};
  nodes.insert(nodes.end(), mids.begin(), mids.begin() + (length - 1));
  nodes.push_back(to);
  std::vector<Formula> edges;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) edges.push_back(edge(nodes[i], nodes[i + 1]));
  return conj(std::move(edges));
}

// Bridge lengths for `count` bridges of at most `width` edges with total
// `total`, shortened greedily from the t end.
std::vector<std::size_t> bridge_lengths(std::size_t count, std::size_t width, std::size_t total) {
  std::vector<std::size_t> len(count, width);
  std::size_t excess = count * width - total;
  for (std::size_t i = count; i-- > 0 && excess > 0;) {
    const std::size_t cut = std::min(excess, width - 1);
    len[i] -= cut;
    excess -= cut;
  }
  return len;
}

// Every pattern of `levels` pivot values (each 0..arity-1) in the order of
// the segments they select along the s-t path.
std::vector<std::vector<std::size_t>> patterns(std::size_t levels, std::size_t arity) {
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t l = 0; l < levels; ++l) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& p : out)
      for (std::size_t v = 0; v < arity; ++v) {
        next.push_back(p);
        next.back().push_back(v);
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::LinearOrder: return "linear-order";
    case Family::Tree: return "tree";
    case Family::StconLog2: return "stcon-log2";
    case Family::StconLog3: return "stcon-log3";
    case Family::Theorem31: return "theorem31";
  }
  return "?";
}

GeneratedSentence gen_lo_forall(std::size_t r) {
  require(r >= 3 && r % 2 == 1, "lo-forall needs an odd round count >= 3");
  return make(lo_forall_prenex(r), Family::LinearOrder, r, g_forall(r));
}

GeneratedSentence gen_lo_exists(std::size_t r) {
  require(r >= 4 && r % 2 == 0, "lo-exists needs an even round count >= 4");
  return make(lo_exists_prenex(r), Family::LinearOrder, r, g_exists(r));
}

GeneratedSentence gen_lo_optimal(std::size_t r) {
  require(r >= 1, "lo-optimal needs a round count >= 1");
  return make(lo_optimal_prenex(r), Family::LinearOrder, r, g_lo(r));
}

GeneratedSentence gen_tree_sentence(std::size_t r) {
  require(r >= 2, "tree needs a round count >= 2");
  return make(tree_prenex(r), Family::Tree, r, t_tree(r));
}

GeneratedSentence gen_tree_forall(std::size_t r) {
  require(r >= 3, "tree-forall needs a round count >= 3");
  return make(tree_forall_prenex(r), Family::Tree, r, t_forall(r));
}

// Level i (0..m) bridges the 2^i dyadic intervals selected by the pivots
// x2, x4, ..., x_{2i} (s picks the left half, t the right half around the
// midpoints x1, x3, ...) with x_{2i+1} as the bridge midpoint; shortening
// the bridges gives the lengths 2^i + 1 .. 2^(i+1).
GeneratedSentence gen_stcon_log2(std::size_t m) {
  const Term s = Term::constant("s"), t = Term::constant("t");
  auto mid = [](std::size_t level) { return x(2 * level + 1); };
  auto pivot = [](std::size_t level) { return x(2 * level + 2); };
  std::vector<Formula> disjuncts;
  for (std::size_t level = m + 1; level-- > 0;) {
    const auto pats = patterns(level, 2);
    const std::size_t lo = std::size_t{1} << level;
    for (std::size_t total = 2 * lo; total > lo; --total) {
      const auto len = bridge_lengths(pats.size(), 2, total);
      std::vector<Formula> clauses;
      for (std::size_t k = 0; k < pats.size(); ++k) {
        Term left = s, right = t;
        std::vector<Formula> guard;
        for (std::size_t i = 0; i < level; ++i) {
          const bool go_right = pats[k][i] == 1;
          guard.push_back(eq(pivot(i), go_right ? t : s));
          (go_right ? left : right) = mid(i);
        }
        Formula body = bridge(left, right, {mid(level)}, len[k]);
        clauses.push_back(guard.empty() ? body : implies(conj(std::move(guard)), body));
      }
      disjuncts.push_back(conj(std::move(clauses)));
    }
  }
  disjuncts.push_back(edge(s, t));
  disjuncts.push_back(eq(s, t));
  Prenex p;
  for (std::size_t i = 0; i < 2 * m + 1; ++i) p.universal.push_back(i % 2 == 1);
  p.matrix = lor(std::move(disjuncts));
  return make(p, Family::StconLog2, m, pow_big(2, m + 1));
}

// Level 1 bridges s..t through x1, x2.  Level i >= 2 adds a pivot
// x_{3i-3} (= s, = t, or neither: first, second or third segment of the
// current split) and the pair x_{3i-2}, x_{3i-1} splitting the selected
// segment in three.  Level i covers the lengths 3^(i-1) + 1 .. 3^i.  The
// guard x1 ≠ s, t on levels >= 2 makes the "neither" pivot realizable.
GeneratedSentence gen_stcon_log3(std::size_t m) {
  require(m >= 1, "stcon-log3 needs a level >= 1");
  const Term s = Term::constant("s"), t = Term::constant("t");
  auto pair = [](std::size_t level) {
    return std::vector<Term>{x(3 * level - 2), x(3 * level - 1)};
  };
  auto pivot = [](std::size_t level) { return x(3 * level); };  // level >= 1
  std::vector<Formula> disjuncts;
  for (std::size_t level = m; level >= 1; --level) {
    const auto pats = patterns(level - 1, 3);
    const std::size_t lo = static_cast<std::size_t>(pow_big(3, level - 1));
    for (std::size_t total = 3 * lo; total > lo; --total) {
      const auto len = bridge_lengths(pats.size(), 3, total);
      std::vector<Formula> clauses;
      if (level >= 2) clauses.push_back(land({neq(x(1), s), neq(x(1), t)}));
      for (std::size_t k = 0; k < pats.size(); ++k) {
        Term left = s, right = t;
        std::vector<Formula> guard;
        for (std::size_t i = 1; i < level; ++i) {
          const auto nodes = pair(i);
          const Term piv = pivot(i);
          switch (pats[k][i - 1]) {
            case 0:
              guard.push_back(eq(piv, s));
              right = nodes[0];
              break;
            case 1:
              guard.push_back(eq(piv, t));
              left = nodes[0];
              right = nodes[1];
              break;
            default:
              guard.push_back(land({neq(piv, s), neq(piv, t)}));
              left = nodes[1];
              break;
          }
        }
        Formula body = bridge(left, right, pair(level), len[k]);
        clauses.push_back(guard.empty() ? body : implies(conj(std::move(guard)), body));
      }
      disjuncts.push_back(conj(std::move(clauses)));
    }
  }
  disjuncts.push_back(edge(s, t));
  disjuncts.push_back(eq(s, t));
  Prenex p;
  for (std::size_t i = 1; i <= 3 * m - 1; ++i) p.universal.push_back(i % 3 == 0);
  p.matrix = lor(std::move(disjuncts));
  return make(p, Family::StconLog3, m, pow_big(3, m));
}

GeneratedSentence gen_theorem31(std::size_t k, std::size_t max_k) {
  require(k >= 2, "theorem31 needs k >= 2");
  if (k > max_k)
    throw ResourceLimit("theorem31-k", "theorem31 enumeration is limited to k <= " +
                                           std::to_string(max_k));
  std::vector<Formula> parts;
  for (const Structure& c : enumerate_structures_up_to_iso(Vocabulary::graph(), k - 1)) {
    const Structure d = apex_extension(c);
    std::vector<Formula> atoms;
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) atoms.push_back(neq(x(a + 1), x(b + 1)));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        Formula e = edge(x(a + 1), x(b + 1));
        atoms.push_back(d.holds(0, static_cast<Element>(a), static_cast<Element>(b)) ? e
                                                                                     : lnot(e));
      }
    Formula f = land(std::move(atoms));
    for (std::size_t i = k; i >= 1; --i) f = exists("x" + std::to_string(i), f);
    parts.push_back(f);
  }
  return {land(std::move(parts)), Family::Theorem31, k, std::nullopt};
}

std::vector<std::string> family_names() {
  return {"lo-forall", "lo-exists", "lo-optimal", "tree",
          "tree-forall", "stcon-log2", "stcon-log3", "theorem31"};
}

GeneratedSentence generate(const std::string& family, std::size_t param) {
  static const std::map<std::string, std::function<GeneratedSentence(std::size_t)>> table{
      {"lo-forall", gen_lo_forall},
      {"lo-exists", gen_lo_exists},
      {"lo-optimal", gen_lo_optimal},
      {"tree", gen_tree_sentence},
      {"tree-forall", gen_tree_forall},
      {"stcon-log2", gen_stcon_log2},
      {"stcon-log3", gen_stcon_log3},
      {"theorem31", [](std::size_t k) { return gen_theorem31(k); }},
  };
  auto it = table.find(family);
  if (it == table.end()) throw InvalidArgument("unknown family: " + family);
  return it->second(param);
}

}  // namespace qgames
