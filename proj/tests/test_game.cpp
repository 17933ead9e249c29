#include <random>

#include "doctest.h"
#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"
#include "qgames/game.hpp"
#include "qgames/growth.hpp"

using namespace qgames;

namespace {

const Vocabulary kGraph = Vocabulary::graph();

using Set = std::vector<Structure>;

Player ms(const Set& a, const Set& b, std::size_t r, const MsOptions& o = {}) {
  return solve_ms(a, b, r, o).winner;
}

Structure lo(std::size_t k) { return make_linear_order(k); }

const char* kInOut = "(exists x (and (exists y (E x y)) (exists y (E y x))))";

Structure random_graph(std::mt19937& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Tuple> edges;
  for (Element i = 0; i < n; ++i)
    for (Element j = 0; j < n; ++j)
      if (coin(rng)) edges.push_back({i, j});
  return Structure(kGraph, n, {edges});
}

bool agrees_on(const Formula& f, const Set& yes, const Set& no) {
  for (const auto& s : yes)
    if (!evaluate(s, f, {})) return false;
  for (const auto& s : no)
    if (evaluate(s, f, {})) return false;
  return true;
}

}  // namespace

TEST_CASE("E-F on linear orders follows 2^r - 1") {
  CHECK(solve_ef(lo(7), lo(8), 3).winner == Player::Duplicator);
  CHECK(solve_ef(lo(6), lo(8), 3).winner == Player::Spoiler);
  for (std::size_t r = 1; r <= 4; ++r)
    for (std::size_t a = 1; a <= 16; ++a)
      for (std::size_t b = a + 1; b <= 16; ++b) {
        const bool dup = solve_ef(lo(a), lo(b), r).winner == Player::Duplicator;
        CHECK_MESSAGE(dup == (a >= (std::size_t{1} << r) - 1), "r=", r, " a=", a, " b=", b);
      }
  CHECK(solve_ef(lo(5), lo(5), 6).winner == Player::Duplicator);
}

TEST_CASE("E-F fast path agrees with the generic search") {
  for (std::size_t r = 0; r <= 3; ++r)
    for (std::size_t a = 1; a <= 8; ++a)
      for (std::size_t b = 1; b <= 8; ++b)
        for (Element pa = 0; pa < a; pa += 3) {
          const Element pb = std::min<Element>(pa, static_cast<Element>(b - 1));
          LabeledStructure x(lo(a), {pa}), y(lo(b), {pb});
          const auto fast = solve_ef(x, y, r);
          CHECK(fast.winner == solve_ef_generic(x, y, r).winner);
          CHECK(fast.winner == (ef_equivalent(x, y, r) ? Player::Duplicator : Player::Spoiler));
        }
}

TEST_CASE("E-F on graphs matches type comparison") {
  std::mt19937 rng(7);
  for (int i = 0; i < 150; ++i) {
    Structure a = random_graph(rng, 1 + rng() % 4, 0.35);
    Structure b = random_graph(rng, 1 + rng() % 4, 0.35);
    const std::size_t r = rng() % 4;
    const auto out = solve_ef(a, b, r);
    CHECK(out.winner ==
          (ef_equivalent(LabeledStructure(a), LabeledStructure(b), r) ? Player::Duplicator
                                                                       : Player::Spoiler));
    CHECK(solve_ef(a, a, r).winner == Player::Duplicator);
  }
}

TEST_CASE("E-F witness is a winning move") {
  const auto out = solve_ef(lo(2), lo(3), 2);
  REQUIRE(out.winner == Player::Spoiler);
  REQUIRE(out.witness);
  // Every reply to the witness leaves a 1-round Duplicator loss.
  const auto& w = *out.witness;
  const Structure a = lo(2), b = lo(3);
  const Structure& mine = w.side == Side::A ? a : b;
  const Structure& theirs = w.side == Side::A ? b : a;
  REQUIRE(w.choices.front() < mine.size());
  for (Element f = 0; f < theirs.size(); ++f) {
    LabeledStructure x(a, {w.side == Side::A ? w.choices.front() : f});
    LabeledStructure y(b, {w.side == Side::A ? f : w.choices.front()});
    CHECK(solve_ef(x, y, 1).winner == Player::Spoiler);
  }
}

TEST_CASE("ef_equivalent examples") {
  CHECK(ef_equivalent(LabeledStructure(lo(20)), LabeledStructure(lo(30)), 3));
  CHECK(ef_equivalent(LabeledStructure(lo(2)), LabeledStructure(lo(3)), 1));
  CHECK_FALSE(ef_equivalent(LabeledStructure(lo(2)), LabeledStructure(lo(3)), 2));
  CHECK(ef_equivalent(LabeledStructure(two_disjoint_edges(), {1}), LabeledStructure(two_disjoint_edges(), {1}), 3));
  CHECK_THROWS_AS(ef_equivalent(LabeledStructure(lo(2), {0}), LabeledStructure(lo(3)), 1),
                  InvalidArgument);
}

TEST_CASE("gap capping") {
  CHECK(gap_cap_linear_order(LabeledStructure(lo(1000)), 3).structure() == lo(7));
  const auto capped = gap_cap_linear_order(LabeledStructure(lo(5), {2}), 1);
  CHECK(capped.structure() == lo(3));
  CHECK(capped.pins == std::vector<Element>{1});
  CHECK(ef_equivalent(LabeledStructure(lo(5), {2}), capped, 1));
  const auto same = gap_cap_linear_order(LabeledStructure(lo(5), {1, 3}), 3);
  CHECK(same.structure() == lo(5));
  CHECK(same.pins == std::vector<Element>{1, 3});
  CHECK_THROWS_AS(gap_cap_linear_order(LabeledStructure(two_disjoint_edges()), 2), InvalidArgument);
  // Soundness of the cap on pinned orders.
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 40, r = rng() % 5, k = rng() % 4;
    std::vector<Element> pins;
    for (std::size_t j = 0; j < k; ++j) pins.push_back(static_cast<Element>(rng() % n));
    LabeledStructure x(lo(n), pins);
    CHECK(solve_ef_generic(x, gap_cap_linear_order(x, r), std::min<std::size_t>(r, 2)).winner ==
              Player::Duplicator);
  }
}

TEST_CASE("M-S on linear orders follows g(r)") {
  CHECK(ms({lo(4)}, {lo(3)}, 3) == Player::Spoiler);
  CHECK(ms({lo(5)}, {lo(4)}, 3) == Player::Duplicator);
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t a = 1; a <= 6; ++a)
      for (std::size_t b = a + 1; b <= 6; ++b) {
        const bool dup = ms({lo(a)}, {lo(b)}, r) == Player::Duplicator;
        CHECK_MESSAGE(dup == (a >= g_lo(r)), "r=", r, " a=", a, " b=", b);
      }
}

TEST_CASE("M-S basics") {
  CHECK(ms({lo(3)}, {lo(3)}, 4) == Player::Duplicator);
  CHECK(ms({lo(2)}, {lo(3)}, 0) == Player::Duplicator);
  CHECK_THROWS_AS(ms({lo(2)}, {two_disjoint_edges()}, 1), InvalidArgument);
  CHECK_THROWS_AS(ms({}, {lo(2)}, 1), InvalidArgument);
  SUBCASE("first-move constraint") {
    MsOptions only_a, only_b;
    only_a.first_move = FirstMove::A;
    only_b.first_move = FirstMove::B;
    // "Some node has a loop" is existential; no universal 1-quantifier
    // sentence separates.
    const Structure loop_and_plain(kGraph, 2, {{{0, 0}}});
    const Structure plain(kGraph, 1, {{}});
    CHECK(ms({loop_and_plain}, {plain}, 1, only_a) == Player::Spoiler);
    CHECK(ms({loop_and_plain}, {plain}, 1, only_b) == Player::Duplicator);
  }
  SUBCASE("class budget") {
    MsOptions tiny;
    tiny.max_classes = 2;
    try {
      ms({lo(9)}, {lo(10)}, 4, tiny);
      FAIL("expected a resource limit");
    } catch (const ResourceLimit& e) {
      CHECK(e.budget() == "classes-per-side");
    }
  }
}

TEST_CASE("introductory digraph example") {
  const Structure a = two_disjoint_edges(), b = three_edge_path();
  CHECK(solve_ef(a, b, 2).winner == Player::Spoiler);
  CHECK(ms({a}, {b}, 2) == Player::Duplicator);
  CHECK(ms({b}, {a}, 2) == Player::Duplicator);
  CHECK(ms({b}, {a}, 3) == Player::Spoiler);
  const Formula sep = extract_separating_sentence(Set{b}, Set{a}, 3);
  CHECK(quants(sep) <= 3);
  CHECK(is_sentence(sep));
  const Formula sigma = parse(kInOut, kGraph);
  for (std::size_t k = 1; k <= 3; ++k)
    for (const auto& g : enumerate_structures_up_to_iso(kGraph, k))
      CHECK(evaluate(g, sep, {}) == evaluate(g, sigma, {}));
  CHECK_THROWS_AS(extract_separating_sentence(Set{b}, Set{a}, 2), NoSeparator);
}

TEST_CASE("extraction on small orders") {
  const Formula f = extract_separating_sentence(Set{lo(2)}, Set{lo(1)}, 2);
  CHECK(quants(f) <= 2);
  for (std::size_t n = 1; n <= 6; ++n) CHECK(evaluate(lo(n), f, {}) == (n >= 2));
  const Formula g = extract_separating_sentence(Set{lo(4)}, Set{lo(3)}, 3);
  CHECK(quants(g) <= 3);
  CHECK(agrees_on(g, {lo(4)}, {lo(3)}));
}

TEST_CASE("two-branch trees") {
  const Structure big = make_tree(two_branch_tree(10, 9));
  const Structure small = make_tree(two_branch_tree(9, 9));
  CHECK(ms({big}, {small}, 4) == Player::Duplicator);
  // A certified Spoiler win: the extracted sentence separates.
  const Structure t54 = make_tree(two_branch_tree(5, 4)), t44 = make_tree(two_branch_tree(4, 4));
  REQUIRE(ms({t54}, {t44}, 3) == Player::Spoiler);
  const Formula f = extract_separating_sentence(Set{t54}, Set{t44}, 3);
  CHECK(quants(f) <= 3);
  CHECK(agrees_on(f, {t54}, {t44}));
}

TEST_CASE("extracted separators are correct and Duplicator wins have none") {
  std::mt19937 rng(11);
  int spoiler = 0, duplicator = 0;
  for (int i = 0; i < 120; ++i) {
    Set a, b;
    const int na = 1 + rng() % 2, nb = 1 + rng() % 2;
    for (int j = 0; j < na; ++j) a.push_back(random_graph(rng, 1 + rng() % 3, 0.4));
    for (int j = 0; j < nb; ++j) b.push_back(random_graph(rng, 1 + rng() % 3, 0.4));
    const std::size_t r = 1 + rng() % 2;
    if (ms(a, b, r) == Player::Spoiler) {
      ++spoiler;
      const Formula f = extract_separating_sentence(a, b, r);
      CHECK(quants(f) <= r);
      CHECK(agrees_on(f, a, b));
      auto brute = find_prenex_separator(a, b, r);
      CHECK(brute.has_value());
    } else {
      ++duplicator;
      CHECK_FALSE(find_prenex_separator(a, b, r).has_value());
    }
  }
  CHECK(spoiler > 10);
  CHECK(duplicator > 10);
}

TEST_CASE("merged and explicit class spaces agree") {
  std::mt19937 rng(5);
  MsOptions explicit_mode;
  explicit_mode.merge_equivalent = false;
  for (int i = 0; i < 80; ++i) {
    Set a{random_graph(rng, 1 + rng() % 4, 0.4)};
    Set b{random_graph(rng, 1 + rng() % 4, 0.4)};
    if (rng() % 2) a.push_back(random_graph(rng, 1 + rng() % 3, 0.4));
    const std::size_t r = 1 + rng() % 3;
    CHECK(ms(a, b, r) == ms(a, b, r, explicit_mode));
  }
  for (std::size_t a = 1; a <= 5; ++a)
    for (std::size_t b = 1; b <= 5; ++b)
      for (std::size_t r = 1; r <= 3; ++r)
        CHECK(ms({lo(a)}, {lo(b)}, r) == ms({lo(a)}, {lo(b)}, r, explicit_mode));
}

TEST_CASE("round monotonicity and E-F implies M-S") {
  std::mt19937 rng(9);
  for (int i = 0; i < 60; ++i) {
    Structure a = random_graph(rng, 1 + rng() % 4, 0.4);
    Structure b = random_graph(rng, 1 + rng() % 4, 0.4);
    bool spoiler_before = false;
    for (std::size_t r = 0; r <= 3; ++r) {
      const bool ms_spoiler = ms({a}, {b}, r) == Player::Spoiler;
      const bool ef_spoiler = solve_ef(a, b, r).winner == Player::Spoiler;
      if (spoiler_before) CHECK(ms_spoiler);
      if (ms_spoiler) CHECK(ef_spoiler);
      spoiler_before = ms_spoiler;
    }
  }
}

TEST_CASE("M-S witness covers every class of the moving side") {
  const auto out = solve_ms(Set{lo(4), lo(6)}, Set{lo(3)}, 3);
  REQUIRE(out.winner == Player::Spoiler);
  REQUIRE(out.witness);
  const auto& w = *out.witness;
  CHECK(w.choices.size() == (w.side == Side::A ? 2u : 1u));
}
