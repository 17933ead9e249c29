#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"
#include "qgames/structure.hpp"

using namespace qgames;

namespace {

// Burnside count of single-binary-relation structures on k nodes:
// average over S_k of 2^(number of cycles on ordered pairs).
std::size_t burnside_digraphs(std::size_t k) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t total = 0, group = 0;
  do {
    ++group;
    std::vector<bool> seen(k * k, false);
    std::size_t cycles = 0;
    for (std::size_t p = 0; p < k * k; ++p) {
      if (seen[p]) continue;
      ++cycles;
      std::size_t q = p;
      while (!seen[q]) {
        seen[q] = true;
        q = perm[q / k] * k + perm[q % k];
      }
    }
    total += std::size_t{1} << cycles;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total / group;
}

Structure random_graph(std::size_t n, std::mt19937& rng, double p = 0.4) {
  std::bernoulli_distribution coin(p);
  std::vector<Tuple> e;
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b)
      if (coin(rng)) e.push_back({a, b});
  return Structure(Vocabulary::graph(), n, {e});
}

bool is_strict_partial_order(const Structure& s) {
  for (Element a = 0; a < s.size(); ++a) {
    if (s.holds(0, a, a)) return false;
    for (Element b = 0; b < s.size(); ++b)
      for (Element c = 0; c < s.size(); ++c)
        if (s.holds(0, a, b) && s.holds(0, b, c) && !s.holds(0, a, c)) return false;
  }
  return true;
}

std::size_t longest_chain(const Structure& s) {
  // Elements dominated by fewer elements come first in a topological order.
  std::vector<Element> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> below(s.size(), 0);
  for (const auto& t : s.tuples(0)) ++below[t[1]];
  std::sort(order.begin(), order.end(), [&](Element a, Element b) { return below[a] < below[b]; });
  std::vector<std::size_t> best(s.size(), 1);
  std::size_t out = 0;
  for (Element b : order) {
    for (Element a = 0; a < s.size(); ++a)
      if (s.holds(0, a, b)) best[b] = std::max(best[b], best[a] + 1);
    out = std::max(out, best[b]);
  }
  return out;
}

}  // namespace

TEST_CASE("vocabulary rejects duplicate names and zero arity") {
  CHECK_THROWS_AS(Vocabulary({{"E", 2}, {"E", 1}}), InvalidArgument);
  CHECK_THROWS_AS(Vocabulary({{"E", 2}}, {"E"}), InvalidArgument);
  CHECK_THROWS_AS(Vocabulary({{"P", 0}}), InvalidArgument);
}

TEST_CASE("structure validates tuples") {
  CHECK_THROWS_AS(Structure(Vocabulary::graph(), 2, {{{0, 2}}}), InvalidArgument);
  CHECK_THROWS_AS(Structure(Vocabulary::graph(), 2, {{{0}}}), InvalidArgument);
  CHECK_THROWS_AS(Structure(Vocabulary::graph_st(), 2, {{}}, {0}), InvalidArgument);
  Structure s(Vocabulary::graph(), 3, {{{1, 2}, {0, 1}, {1, 2}}});
  CHECK(s.tuples(0).size() == 2);
  CHECK(s.holds(0, 1, 2));
  CHECK_FALSE(s.holds(0, 2, 1));
}

TEST_CASE("make_linear_order") {
  CHECK_THROWS_AS(make_linear_order(0), InvalidArgument);
  CHECK(make_linear_order(1).tuples(0).empty());
  CHECK(make_linear_order(3).tuples(0) == std::vector<Tuple>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(make_linear_order(10).tuples(0).size() == 45);
}

TEST_CASE("make_tree and tree_depth") {
  CHECK(make_tree(TreeSpec::path(4)) == make_linear_order(4));
  // Root x with children z and q; z has child s.  Depth 3.
  const std::size_t x = 0, z = 1, q = 2, s = 3;
  TreeSpec fig({TreeSpec::kRoot, x, x, z});
  Structure t = make_tree(fig);
  std::vector<std::size_t> parent = fig.parents();
  CHECK(tree_depth(fig) == 3);
  // Map spec nodes to structure elements through the order itself: the
  // root dominates every other element.
  std::size_t root_el = 0;
  for (Element e = 0; e < t.size(); ++e) {
    std::size_t below = 0;
    for (Element f = 0; f < t.size(); ++f) below += t.holds(0, f, e);
    if (below == 3) root_el = e;
  }
  for (Element e = 0; e < t.size(); ++e)
    if (e != root_el) {
      CHECK(t.holds(0, e, root_el));    // x > everything else, e.g. x > q
      CHECK_FALSE(t.holds(0, root_el, e));
    }
  (void)q;
  (void)s;
  CHECK(tree_depth(TreeSpec({TreeSpec::kRoot})) == 1);
  TreeSpec star({TreeSpec::kRoot, 0, 0, 0});
  CHECK(make_tree(star).tuples(0).size() == 3);
  CHECK_THROWS_AS(TreeSpec({1, 0}), InvalidArgument);
  CHECK_THROWS_AS(TreeSpec({TreeSpec::kRoot, TreeSpec::kRoot}), InvalidArgument);
  CHECK_THROWS_AS(TreeSpec({TreeSpec::kRoot, 2, 1}), InvalidArgument);
}

TEST_CASE("two_branch_tree") {
  auto t = two_branch_tree(10, 9);
  CHECK(t.size() == 18);
  CHECK(tree_depth(t) == 10);
  CHECK(tree_depth(two_branch_tree(9, 9)) == 9);
  CHECK(two_branch_tree(1, 1).size() == 1);
  CHECK_THROWS_AS(two_branch_tree(0, 3), InvalidArgument);
}

TEST_CASE("every tree induces a strict partial order whose longest chain is the depth") {
  for (std::size_t n = 1; n <= 8; ++n)
    for (const auto& spec : enumerate_rooted_trees(n)) {
      Structure s = make_tree(spec);
      CHECK(is_strict_partial_order(s));
      CHECK(longest_chain(s) == tree_depth(spec));
    }
}

TEST_CASE("rooted tree counts") {
  const std::size_t expected[] = {0, 1, 1, 2, 4, 9, 20, 48, 115, 286};
  for (std::size_t n = 1; n <= 9; ++n) CHECK(enumerate_rooted_trees(n).size() == expected[n]);
}

TEST_CASE("disjoint_union") {
  Structure a(Vocabulary::graph(), 3, {{{0, 1}}});
  Structure b(Vocabulary::graph(), 3, {{{2, 0}}});
  std::vector<Structure> one{a};
  CHECK(disjoint_union(one) == a);
  std::vector<Structure> two{a, b};
  Structure u = disjoint_union(two);
  CHECK(u.size() == 6);
  CHECK(u.holds(0, 5, 3));
  std::vector<Structure> bad{a, make_linear_order(2)};
  CHECK_THROWS_AS(disjoint_union(bad), InvalidArgument);
  std::vector<Structure> consts{directed_path(1)};
  CHECK_THROWS_AS(disjoint_union(consts), InvalidArgument);
}

TEST_CASE("delete_element") {
  Structure lo3 = make_linear_order(3);
  CHECK(delete_element(lo3, 1) == make_linear_order(2));
  CHECK(delete_element(make_linear_order(1), 0).size() == 0);
  CHECK_THROWS_AS(delete_element(lo3, 3), InvalidArgument);
  CHECK_THROWS_AS(delete_element(directed_path(2), 0), InvalidArgument);
}

TEST_CASE("apex_extension round trip") {
  Structure empty1(Vocabulary::graph(), 1, {{}});
  Structure d = apex_extension(empty1);
  CHECK(d.size() == 2);
  CHECK(d.tuples(0) == std::vector<Tuple>{{1, 0}});
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    Structure c = random_graph(1 + i % 4, rng);
    Structure back = delete_element(apex_extension(c), static_cast<Element>(c.size()));
    CHECK(brute_force_isomorphic(LabeledStructure(back), LabeledStructure(c)));
  }
}

TEST_CASE("partial_isomorphism") {
  LabeledStructure e1(make_linear_order(3)), e2(make_linear_order(2));
  CHECK(partial_isomorphism(e1, e2));
  LabeledStructure a(make_linear_order(3), {0, 2});
  CHECK(partial_isomorphism(a, LabeledStructure(make_linear_order(2), {0, 1})));
  CHECK_FALSE(partial_isomorphism(a, LabeledStructure(make_linear_order(2), {1, 0})));
  CHECK_THROWS_AS(partial_isomorphism(a, LabeledStructure(make_linear_order(2), {1})),
                  InvalidArgument);
  // Equality of pins must be mirrored.
  CHECK_FALSE(partial_isomorphism(LabeledStructure(make_linear_order(3), {1, 1}),
                                  LabeledStructure(make_linear_order(3), {1, 2})));
  // Constants take part in the map.
  Structure p = directed_path(2);
  CHECK(partial_isomorphism(LabeledStructure(p, {1}), LabeledStructure(directed_path(2), {1})));
  // 0 -> 1 -> t holds in the 2-path but not in the 3-path.
  CHECK_FALSE(
      partial_isomorphism(LabeledStructure(p, {1}), LabeledStructure(directed_path(3), {1})));
  CHECK_FALSE(
      partial_isomorphism(LabeledStructure(p, {1}), LabeledStructure(directed_path(3), {2})));
}

TEST_CASE("partial isomorphism failure persists under extension") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    Structure a = random_graph(4, rng), b = random_graph(4, rng);
    LabeledStructure la(a), lb(b);
    bool broken = false;
    for (int round = 0; round < 4; ++round) {
      la = la.extended(rng() % 4);
      lb = lb.extended(rng() % 4);
      bool iso = partial_isomorphism(la, lb);
      if (broken) CHECK_FALSE(iso);
      broken = broken || !iso;
    }
  }
}

TEST_CASE("labeled_canonical_form basic keys") {
  LabeledStructure a(make_linear_order(5), {2}), b(make_linear_order(5), {2});
  CHECK(labeled_canonical_form(a) == labeled_canonical_form(b));
  CHECK(labeled_canonical_form(LabeledStructure(make_linear_order(5), {1})) !=
        labeled_canonical_form(LabeledStructure(make_linear_order(5), {3})));
  // Mirror images of a two-branch tree with mirrored pins.
  TreeSpec left({TreeSpec::kRoot, 0, 1, 0});
  TreeSpec right({TreeSpec::kRoot, 0, 0, 2});
  Structure l = make_tree(left), r = make_tree(right);
  // Pin the deepest leaf in each.
  auto deepest = [](const Structure& s) {
    for (Element e = 0; e < s.size(); ++e) {
      std::size_t above = 0;
      for (Element f = 0; f < s.size(); ++f) above += s.holds(0, e, f);
      if (above == 2) return e;
    }
    return Element{0};
  };
  CHECK(labeled_canonical_form(LabeledStructure(l, {deepest(l)})) ==
        labeled_canonical_form(LabeledStructure(r, {deepest(r)})));
  CHECK_THROWS_AS(labeled_canonical_form(LabeledStructure(make_linear_order(13))), ResourceLimit);
  CanonOptions big;
  big.max_elements = 20;
  CHECK_NOTHROW(labeled_canonical_form(LabeledStructure(make_linear_order(13)), big));
}

TEST_CASE("canonical keys agree with brute-force isomorphism on small structures") {
  std::mt19937 rng(3);
  for (int i = 0; i < 600; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const double p = (rng() % 5) / 5.0 + 0.1;
    Structure a = random_graph(n, rng, p);
    // b is either a random relabeling of a or an unrelated graph.
    std::vector<Element> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Structure b = a;
    if (rng() % 2) {
      std::vector<Tuple> e;
      for (const auto& t : a.tuples(0)) e.push_back({perm[t[0]], perm[t[1]]});
      b = Structure(Vocabulary::graph(), n, {e});
    } else {
      b = random_graph(n, rng, p);
    }
    std::vector<Element> pa, pb;
    const std::size_t pins = rng() % 3;
    for (std::size_t j = 0; j < pins; ++j) {
      Element x = rng() % n;
      pa.push_back(x);
      pb.push_back(rng() % 4 ? perm[x] : static_cast<Element>(rng() % n));
    }
    LabeledStructure la(a, pa), lb(b, pb);
    CHECK((labeled_canonical_form(la) == labeled_canonical_form(lb)) ==
          brute_force_isomorphic(la, lb));
  }
}

TEST_CASE("highly symmetric structures canonicalize quickly") {
  Structure empty(Vocabulary::graph(), 12, {{}});
  CHECK_NOTHROW(labeled_canonical_form(LabeledStructure(empty)));
  std::vector<Tuple> all;
  for (Element a = 0; a < 12; ++a)
    for (Element b = 0; b < 12; ++b)
      if (a != b) all.push_back({a, b});
  CHECK_NOTHROW(labeled_canonical_form(LabeledStructure(Structure(Vocabulary::graph(), 12, {all}))));
}

TEST_CASE("enumerate_structures_up_to_iso matches Burnside") {
  CHECK(enumerate_structures_up_to_iso(Vocabulary::graph(), 0).size() == 1);
  CHECK(enumerate_structures_up_to_iso(Vocabulary::graph(), 1).size() == 2);
  CHECK(enumerate_structures_up_to_iso(Vocabulary::graph(), 2).size() == 10);
  for (std::size_t k = 1; k <= 3; ++k) {
    auto reps = enumerate_structures_up_to_iso(Vocabulary::graph(), k);
    CHECK(reps.size() == burnside_digraphs(k));
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j)
        CHECK_FALSE(brute_force_isomorphic(LabeledStructure(reps[i]), LabeledStructure(reps[j])));
  }
  CHECK(enumerate_structures_up_to_iso(Vocabulary::graph(), 4).size() == burnside_digraphs(4));
  CHECK_THROWS_AS(enumerate_structures_up_to_iso(Vocabulary::graph(), 5), ResourceLimit);
}
