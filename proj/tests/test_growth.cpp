#include "doctest.h"
#include "qgames/errors.hpp"
#include "qgames/growth.hpp"

using namespace qgames;

TEST_CASE("f") {
  CHECK(f_lo(0) == 0);
  CHECK(f_lo(4) == 15);
  CHECK(f_lo(10) == 1023);
}

TEST_CASE("g") {
  CHECK(g_lo(4) == 10);
  CHECK(g_lo(7) == 85);
  CHECK(g_lo(10) == 682);
  CHECK_THROWS_AS(g_lo(0), InvalidArgument);
}

TEST_CASE("g_forall and g_exists") {
  CHECK(g_forall(3) == 4);
  CHECK(g_exists(4) == 9);
  CHECK(g_forall(5) == 18);
  CHECK(g_exists(6) == 37);
  CHECK(g_forall(7) == 74);
  CHECK_THROWS_AS(g_forall(4), InvalidArgument);
  CHECK_THROWS_AS(g_exists(5), InvalidArgument);
  for (std::size_t r = 2; r <= 20; ++r) {
    CHECK(g_exists(2 * r) == 2 * g_forall(2 * r - 1) + 1);
    CHECK(g_forall(2 * r + 1) == 2 * g_exists(2 * r));
    CHECK(g_forall(2 * r + 1) == g_forall_recurrence(2 * r + 1));
    CHECK(g_exists(2 * r) == g_exists_recurrence(2 * r));
  }
}

TEST_CASE("t") {
  CHECK(t_tree(2) == 2);
  CHECK(t_tree(3) == 4);
  CHECK(t_tree(4) == 8);
  CHECK(t_tree(9) == 232);
  CHECK(t_forall(5) == 9);
  CHECK(t_tree_recurrence(5) == 16);
  CHECK(t_tree_recurrence(6) == 28);
  CHECK(t_tree_recurrence(7) == 60);
  CHECK_THROWS_AS(t_tree(1), InvalidArgument);
  CHECK_THROWS_AS(t_forall(2), InvalidArgument);
  for (std::size_t r = 4; r <= 40; ++r) CHECK(t_tree(r) == t_tree_recurrence(r));
  // The closed forms divide exactly for every argument.
  for (std::size_t r = 1; r <= 60; ++r) {
    BigInt four = BigInt(1) << (2 * r);
    CHECK((7 * four + 24 * r - 16) % 18 == 0);
    CHECK((8 * four + 12 * r - 8) % 9 == 0);
  }
}

TEST_CASE("table rows") {
  auto rows = growth_table(10);
  REQUIRE(rows.size() == 9);
  const int g[] = {2, 4, 10, 21, 42, 85, 170, 341, 682};
  const int t[] = {2, 4, 8, 16, 28, 60, 104, 232, 404};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].r == i + 2);
    CHECK(rows[i].f == (1 << (i + 2)) - 1);
    CHECK(rows[i].g == g[i]);
    CHECK(rows[i].t == t[i]);
    CHECK(rows[i].t <= rows[i].g);
    CHECK(rows[i].g <= rows[i].f);
  }
}

TEST_CASE("sentence count bound") {
  CHECK(sentence_count_upper_bound(1, 1, 2) == 8);
  CHECK(sentence_count_upper_bound(2, 1, 2) == 262144);
  CHECK_THROWS_AS(sentence_count_upper_bound(10, 1, 2), ResourceLimit);
  CHECK_THROWS_AS(sentence_count_upper_bound(0, 1, 2), InvalidArgument);
}
