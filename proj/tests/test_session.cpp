#include <functional>
#include <set>

#include "doctest.h"
#include "qgames/session.hpp"

using namespace qgames;

namespace {

std::vector<LabeledStructure> one(const Structure& s) { return {LabeledStructure(s)}; }

std::vector<ClassChoice> pick_all(const GameSession& g, Side side, Element e) {
  std::vector<ClassChoice> out;
  for (const auto& c : g.side(side))
    out.push_back({c.index, static_cast<Element>(e % c.value.structure().size())});
  return out;
}

// Every line of play in which Spoiler picks the same element `e` (mod
// size) in every class, on sides given by `sides`.
void play_all(const Structure& a, const Structure& b, std::size_t r,
              const std::function<void(const GameSession&)>& at_end) {
  std::function<void(GameSession)> rec = [&](GameSession g) {
    if (g.winner()) return at_end(g);
    for (Side side : {Side::A, Side::B})
      for (Element e = 0; e < 4; ++e) {
        GameSession next = g;
        next.spoiler_move(side, pick_all(next, side, e));
        next.duplicator_auto();
        rec(next);
      }
  };
  rec(GameSession(one(a), one(b), r, Player::Spoiler));
}

}  // namespace

TEST_CASE("disjoint edges versus a path in two rounds: Duplicator wins every line of play") {
  std::size_t lines = 0;
  play_all(two_disjoint_edges(), three_edge_path(), 2, [&](const GameSession& g) {
    ++lines;
    CHECK(g.status() == SessionStatus::DuplicatorWon);
    CHECK(g.rounds_left() == 0);
  });
  CHECK(lines == 64);
}

TEST_CASE("following the solver witness wins l.o.(4) vs l.o.(3) in three rounds") {
  GameSession g(one(make_linear_order(4)), one(make_linear_order(3)), 3, Player::Spoiler);
  while (!g.winner()) {
    const EngineMove hint = g.engine_suggestion();
    CHECK(hint.exact);
    CHECK(hint.solver_winner == Player::Spoiler);
    g.spoiler_move(hint.side, hint.choices);
    g.duplicator_auto();
  }
  CHECK(g.status() == SessionStatus::SpoilerWon);
}

TEST_CASE("engine Spoiler against Duplicator-auto") {
  GameSession g(one(make_linear_order(4)), one(make_linear_order(3)), 3, Player::Duplicator);
  while (!g.winner()) {
    g.engine_spoiler();
    g.duplicator_auto();
  }
  CHECK(g.status() == SessionStatus::SpoilerWon);
  // Duplicator wins with one round fewer, and the engine knows it.
  GameSession h(one(make_linear_order(4)), one(make_linear_order(3)), 2, Player::Duplicator);
  const EngineMove m = h.engine_spoiler();
  CHECK(m.exact);
  CHECK(m.solver_winner == Player::Duplicator);
  h.duplicator_auto();
  h.engine_spoiler();
  h.duplicator_auto();
  CHECK(h.status() == SessionStatus::DuplicatorWon);
}

TEST_CASE("heuristic fallback when the solver runs out of budget") {
  SessionOptions opts;
  opts.solver.max_memo = 1;
  GameSession g(one(make_linear_order(4)), one(make_linear_order(3)), 3, Player::Duplicator,
                opts);
  const EngineMove m = g.engine_suggestion();
  CHECK_FALSE(m.exact);
  CHECK(m.budget == "memo-entries");
  // No single move breaks a pair here, so the tie-break gives element 0 on A.
  CHECK(m.side == Side::A);
  CHECK(m.choices == std::vector<ClassChoice>{{0, 0}});
}

TEST_CASE("heuristic prefers moves that break pairs") {
  // A is l.o.(2) pinned at its bottom, B is l.o.(2) pinned at its top.
  // Picking above A's pin, or below B's pin, leaves Duplicator no answer;
  // the tie between the two sides goes to A.
  GameSession g({LabeledStructure(make_linear_order(2), {0})},
                {LabeledStructure(make_linear_order(2), {1})}, 1, Player::Spoiler);
  REQUIRE(g.status() == SessionStatus::SpoilerToMove);
  const SpoilerMove m = g.heuristic_move();
  CHECK(m.side == Side::A);
  CHECK(m.choices == std::vector<Element>{1});
  g.spoiler_move(m.side, {{g.side(Side::A).front().index, 1}});
  g.duplicator_auto();
  CHECK(g.status() == SessionStatus::SpoilerWon);
}

TEST_CASE("session errors") {
  GameSession g(one(make_linear_order(4)), one(make_linear_order(3)), 1, Player::Spoiler);
  const std::size_t ia = g.side(Side::A).front().index;
  CHECK_THROWS_AS(g.spoiler_move(Side::A, {{ia, 99}}), IllegalMove);
  CHECK_THROWS_AS(g.spoiler_move(Side::A, {{ia + 100, 0}}), IllegalMove);
  CHECK_THROWS_AS(g.spoiler_move(Side::A, {}), IllegalMove);
  CHECK_THROWS_AS(g.duplicator_auto(), WrongTurn);
  g.spoiler_move(Side::A, {{ia, 0}});
  CHECK(g.status() == SessionStatus::DuplicatorToMove);
  CHECK_THROWS_AS(g.spoiler_move(Side::A, {{ia, 0}}), WrongTurn);
  g.duplicator_auto();
  CHECK(g.winner());
  CHECK_THROWS_AS(g.duplicator_auto(), SessionFinished);
  CHECK_THROWS_AS(g.spoiler_move(Side::B, {}), SessionFinished);

  GameSession e(one(make_linear_order(2)), one(make_linear_order(3)), 1, Player::Duplicator);
  CHECK_THROWS_AS(e.spoiler_move(Side::A, {{0, 0}}), WrongTurn);
}

TEST_CASE("stable class indices and deduplication") {
  GameSession g(one(make_linear_order(5)), one(make_linear_order(4)), 3, Player::Spoiler);
  const std::size_t ia = g.side(Side::A).front().index;
  g.spoiler_move(Side::A, {{ia, 2}});
  CHECK(g.side(Side::A).front().index == ia);
  g.duplicator_auto();
  // l.o.(4) with one pin: positions 0 and 3, 1 and 2 are not isomorphic
  // (pins respect the order), so there are four classes with fresh indices.
  const auto& b = g.side(Side::B);
  REQUIRE(b.size() == 4);
  std::vector<std::size_t> before;
  for (const auto& c : b) {
    CHECK(c.index > ia);
    before.push_back(c.index);
  }
  // A move on B naming classes in any order is accepted.
  std::vector<ClassChoice> choices;
  for (auto it = b.rbegin(); it != b.rend(); ++it) choices.push_back({it->index, 0});
  g.spoiler_move(Side::B, choices);
  // The four extended classes stay distinct and keep their indices.
  REQUIRE(g.side(Side::B).size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(g.side(Side::B)[i].index == before[i]);
  g.duplicator_auto();
  // A side expanded from one class: indices are fresh and distinct.
  std::set<std::size_t> seen;
  for (const auto& c : g.side(Side::A)) CHECK(seen.insert(c.index).second);

  // Identical structures merge on creation and Duplicator wins at once.
  GameSession same({LabeledStructure(make_linear_order(3)), LabeledStructure(make_linear_order(3))},
                   one(make_linear_order(3)), 2, Player::Spoiler);
  CHECK(same.side(Side::A).size() == 1);
  CHECK(same.status() == SessionStatus::DuplicatorWon);
}

TEST_CASE("replaying the log reproduces the session") {
  GameSession g(one(two_disjoint_edges()), one(three_edge_path()), 2, Player::Spoiler);
  g.spoiler_move(Side::B, pick_all(g, Side::B, 1));
  g.duplicator_auto();
  g.spoiler_move(Side::A, pick_all(g, Side::A, 2));
  GameSession replay(one(two_disjoint_edges()), one(three_edge_path()), 2, Player::Spoiler);
  for (const LoggedMove& m : g.log()) replay.apply(m);
  CHECK(replay.status() == g.status());
  CHECK(replay.log() == g.log());
  for (Side s : {Side::A, Side::B}) {
    REQUIRE(replay.side(s).size() == g.side(s).size());
    for (std::size_t i = 0; i < g.side(s).size(); ++i) {
      CHECK(replay.side(s)[i].index == g.side(s)[i].index);
      CHECK(replay.side(s)[i].value.pins == g.side(s)[i].value.pins);
    }
  }
}
