#include "doctest.h"
#include "qgames/errors.hpp"
#include "qgames/io.hpp"

using namespace qgames;
using nlohmann::json;

TEST_CASE("structure JSON round trip") {
  for (const Structure& s : {three_edge_path(), directed_path(3), make_linear_order(4),
                             make_tree(two_branch_tree(3, 2))}) {
    const json j = structure_to_json(s);
    CHECK(structure_from_json(j) == s);
    CHECK(structure_from_json(json::parse(j.dump())) == s);
  }
}

TEST_CASE("structure JSON layout") {
  const json j = structure_to_json(directed_path(2));
  CHECK(j["size"] == 3);
  CHECK(j["vocabulary"]["relations"][0]["name"] == "E");
  CHECK(j["vocabulary"]["relations"][0]["arity"] == 2);
  CHECK(j["vocabulary"]["constants"] == json({"s", "t"}));
  CHECK(j["relations"]["E"] == json({{0, 1}, {1, 2}}));
  CHECK(j["constants"]["s"] == 0);
  CHECK(j["constants"]["t"] == 2);
}

TEST_CASE("malformed structure documents") {
  const json base = structure_to_json(directed_path(2));
  json j = base;
  j["relations"]["E"].push_back({0, 7});
  CHECK_THROWS_AS(structure_from_json(j), InvalidArgument);
  j = base;
  j["relations"]["F"] = json::array();
  CHECK_THROWS_AS(structure_from_json(j), InvalidArgument);
  j = base;
  j["constants"].erase("t");
  CHECK_THROWS_AS(structure_from_json(j), InvalidArgument);
  j = base;
  j["relations"]["E"].push_back({0});
  CHECK_THROWS_AS(structure_from_json(j), InvalidArgument);
  j = base;
  j.erase("size");
  CHECK_THROWS_AS(structure_from_json(j), InvalidArgument);
  CHECK_THROWS_AS(structure_from_json(json::array()), InvalidArgument);
}
