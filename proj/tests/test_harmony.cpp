#include <random>

#include "doctest.h"
#include "qgames/errors.hpp"
#include "qgames/game.hpp"
#include "qgames/generators.hpp"
#include "qgames/harmony.hpp"

using namespace qgames;

TEST_CASE("rank-count structure sizes") {
  CHECK(rank_count_structure(2).size() == 2 * 2);
  CHECK(rank_count_structure(3).size() == 3 * 10);
}

TEST_CASE("harmony survives Spoiler moves on A") {
  const Structure a = rank_count_structure(3);
  std::mt19937 rng(11);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(a.size() - 1));
  for (int trial = 0; trial < 50; ++trial) {
    HarmonyGame game(a);
    CHECK(game.property_star());
    for (int round = 0; round < 5; ++round) {
      std::vector<Element> choices;
      for (std::size_t i = 0; i < game.a_copies().size(); ++i) choices.push_back(pick(rng));
      game.spoiler_moves_a(choices);
      CHECK(game.property_star());
      CHECK(game.has_matching_pair());
    }
  }
}

TEST_CASE("a Spoiler move on the B side breaks Property *") {
  // Every B_p answers 0 except B_0, which must answer something else; the
  // scripted Duplicator then copies A with that answer too.
  const Structure a = rank_count_structure(2);
  HarmonyGame game(a);
  std::vector<Element> choices;
  for (const auto& b : game.b_copies()) choices.push_back(*b.deleted == 0 ? 1 : 0);
  game.spoiler_moves_b(choices);
  std::string why;
  CHECK_FALSE(game.property_star(&why));
  CHECK(why.find("pins [1]") != std::string::npos);
  CHECK(game.has_matching_pair());
}

TEST_CASE("a k-quantifier sentence already separates A from every B_p") {
  for (std::size_t k : {2, 3}) {
    const Structure a = rank_count_structure(k);
    const Formula sep = rank_count_short_separator(k);
    CHECK(quants(sep) == k);
    CHECK(evaluate(a, sep));
    for (Element p = 0; p < a.size(); ++p) CHECK_FALSE(evaluate(delete_element(a, p), sep));
  }
  // The exact solver agrees at k = 2: two rounds suffice for Spoiler.
  const Structure a = rank_count_structure(2);
  std::vector<Structure> bs;
  for (Element p = 0; p < a.size(); ++p) bs.push_back(delete_element(a, p));
  CHECK(solve_ms(std::vector<Structure>{a}, bs, 1).winner == Player::Duplicator);
  CHECK(solve_ms(std::vector<Structure>{a}, bs, 2).winner == Player::Spoiler);
}

TEST_CASE("harmony move validation") {
  HarmonyGame game(rank_count_structure(2));
  CHECK_THROWS_AS(game.spoiler_moves_a({0, 1}), InvalidArgument);
  std::vector<Element> bad(game.b_copies().size(), 0);
  CHECK_THROWS_AS(game.spoiler_moves_b(bad), InvalidArgument);  // B_0 has no point 0
}
