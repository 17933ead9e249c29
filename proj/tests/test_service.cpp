#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "qgames/io.hpp"
#include "qgames/service.hpp"

using namespace qgames;
using nlohmann::json;

namespace {

HttpResponse get(GameService& s, const std::string& path,
                 const std::map<std::string, std::string>& q = {}) {
  return s.handle("GET", path, q, "");
}
HttpResponse post(GameService& s, const std::string& path, const json& body = json::object()) {
  return s.handle("POST", path, {}, body.dump());
}

std::string create(GameService& s, const json& body) {
  const HttpResponse r = post(s, "/sessions", body);
  REQUIRE(r.status == 201);
  return r.body["id"];
}

// Spoiler picks element `e` (mod size) in every class of `side`.
json move_all(const json& state, const std::string& side, std::size_t e) {
  json choices = json::array();
  for (const json& c : state[side == "A" ? "sideA" : "sideB"])
    choices.push_back({{"classIndex", c["index"]},
                       {"element", e % c["structure"]["size"].get<std::size_t>()}});
  return {{"side", side}, {"choices", choices}};
}

json strip(json v) {
  v.erase("createdAt");
  return v;
}

}  // namespace

TEST_CASE("edges-versus-path session played to the end is won by Duplicator") {
  GameService svc;
  for (const std::string first : {"A", "B"})
    for (const std::string second : {"A", "B"}) {
      const std::string id = create(
          svc, {{"familyA", "two-disjoint-edges"}, {"familyB", "three-edge-path"}, {"rounds", 2}, {"humanRole", "spoiler"}});
      json state = get(svc, "/sessions/" + id).body;
      CHECK(state["status"] == "spoiler-to-move");
      for (const std::string& side : {first, second}) {
        HttpResponse r = post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, side, 1));
        REQUIRE(r.status == 200);
        CHECK(r.body["status"] == "duplicator-to-move");
        r = post(svc, "/sessions/" + id + "/duplicator-auto");
        REQUIRE(r.status == 200);
        state = r.body;
      }
      CHECK(state["status"] == "duplicator-won");
      CHECK(state["winner"] == "duplicator");
      CHECK(state["roundsLeft"] == 0);
    }
}

TEST_CASE("engine Spoiler wins l.o.(4) vs l.o.(3) and the separator is offered") {
  GameService svc;
  const std::string id = create(svc, {{"a", "linear-order:4"},
                                      {"b", "linear-order:3"},
                                      {"rounds", 3},
                                      {"humanRole", "duplicator"}});
  CHECK(get(svc, "/sessions/" + id + "/separator").status == 409);
  json state = get(svc, "/sessions/" + id).body;
  for (int round = 0; round < 3 && state["winner"].is_null(); ++round) {
    HttpResponse r = post(svc, "/sessions/" + id + "/engine-spoiler");
    REQUIRE(r.status == 200);
    CHECK(r.body["engineMove"]["source"] == "solver");
    CHECK(r.body["engineMove"]["exact"] == true);
    r = post(svc, "/sessions/" + id + "/duplicator-auto");
    REQUIRE(r.status == 200);
    state = r.body;
  }
  CHECK(state["status"] == "spoiler-won");
  const HttpResponse sep = get(svc, "/sessions/" + id + "/separator");
  REQUIRE(sep.status == 200);
  CHECK(sep.body["quants"].get<int>() <= 3);
  json ev = post(svc, "/evaluate", {{"structure", "linear-order:4"}, {"formula", sep.body["formula"]}}).body;
  CHECK(ev["value"] == true);
  ev = post(svc, "/evaluate", {{"structure", "linear-order:3"}, {"formula", sep.body["formula"]}}).body;
  CHECK(ev["value"] == false);
}

TEST_CASE("move errors map to HTTP statuses") {
  GameService svc;
  const std::string id = create(svc, {{"a", "linear-order:4"}, {"b", "linear-order:3"}, {"rounds", 1}});
  const json state = get(svc, "/sessions/" + id).body;
  const std::size_t ia = state["sideA"][0]["index"];
  const std::string base = "/sessions/" + id;
  json bad = {{"side", "A"}, {"choices", {{{"classIndex", ia}, {"element", 99}}}}};
  CHECK(post(svc, base + "/spoiler-move", bad).status == 422);
  bad["choices"][0]["element"] = -1;
  CHECK(post(svc, base + "/spoiler-move", bad).status == 422);
  CHECK(post(svc, base + "/duplicator-auto").status == 409);
  CHECK(get(svc, base).body == state);  // failed moves change nothing
  CHECK(post(svc, base + "/spoiler-move", move_all(state, "A", 0)).status == 200);
  CHECK(post(svc, base + "/spoiler-move", move_all(state, "A", 0)).status == 409);
  CHECK(post(svc, base + "/duplicator-auto").status == 200);
  CHECK(post(svc, base + "/duplicator-auto").status == 409);  // game over
  CHECK(get(svc, "/sessions/nope").status == 404);
  CHECK(post(svc, "/sessions/nope/duplicator-auto").status == 404);
  CHECK(get(svc, "/nowhere").status == 404);
  CHECK(svc.handle("POST", "/sessions", {}, "{not json").status == 400);
  CHECK(post(svc, "/sessions", {{"a", "no-such-preset"}, {"b", "two-disjoint-edges"}, {"rounds", 1}}).status ==
        400);
}

TEST_CASE("budget overruns report the budget name") {
  ServiceOptions opts;
  opts.session.max_classes = 3;
  GameService svc(opts);
  const std::string id = create(svc, {{"a", "linear-order:5"}, {"b", "linear-order:4"}, {"rounds", 2}});
  const json state = get(svc, "/sessions/" + id).body;
  CHECK(post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, "A", 0)).status == 200);
  const HttpResponse r = post(svc, "/sessions/" + id + "/duplicator-auto");
  CHECK(r.status == 429);
  CHECK(r.body["budget"] == "classes-per-side");
  CHECK(get(svc, "/sessions/" + id).body["status"] == "duplicator-to-move");
}

TEST_CASE("heuristic engine move when the solver budget is tiny") {
  ServiceOptions opts;
  opts.session.solver.max_memo = 1;
  GameService svc(opts);
  const std::string id = create(svc, {{"a", "linear-order:4"}, {"b", "linear-order:3"}, {"rounds", 3},
                                      {"humanRole", "duplicator"}});
  const HttpResponse r = post(svc, "/sessions/" + id + "/engine-spoiler");
  REQUIRE(r.status == 200);
  CHECK(r.body["engineMove"]["source"] == "heuristic");
  CHECK(r.body["engineMove"]["exact"] == false);
  CHECK(r.body["engineMove"]["budget"] == "memo-entries");
}

TEST_CASE("generate, tables and evaluate") {
  GameService svc;
  HttpResponse r = get(svc, "/generate", {{"family", "stcon-log3"}, {"param", "2"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["quants"] == 5);
  CHECK(r.body["threshold"] == 9);
  r = get(svc, "/generate", {{"family", "tree"}, {"param", "4"}});
  CHECK(r.body["threshold"] == 8);
  CHECK(get(svc, "/generate", {{"family", "nope"}, {"param", "2"}}).status == 400);
  CHECK(get(svc, "/generate", {{"family", "tree"}}).status == 400);
  CHECK(get(svc, "/generate", {{"family", "theorem31"}, {"param", "9"}}).status == 429);

  r = get(svc, "/tables", {{"maxR", "10"}});
  REQUIRE(r.status == 200);
  const json& rows = r.body["rows"];
  REQUIRE(rows.size() == 9);
  CHECK(rows[2]["r"] == 4);
  CHECK(rows[2]["g"] == 10);
  CHECK(rows[2]["f"] == 15);
  CHECK(rows[8]["t"] == 404);
  CHECK(rows[1]["gForall"] == 4);
  CHECK(get(svc, "/tables", {{"maxR", "x"}}).status == 400);

  const json path = structure_to_json(directed_path(2));
  r = post(svc, "/evaluate", {{"structure", path}, {"formula", "(exists x (and (E s x) (E x t)))"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["value"] == true);
  CHECK(post(svc, "/evaluate", {{"structure", path}, {"formula", "(exists x"}}).status == 400);
}

TEST_CASE("GET state equals the replay of the persisted move log") {
  const auto dir = std::filesystem::temp_directory_path() / "qgames_service_test";
  std::filesystem::remove_all(dir);
  ServiceOptions opts;
  opts.persist_dir = dir;
  json before;
  std::string id;
  {
    GameService svc(opts);
    id = create(svc, {{"a", "two-disjoint-edges"}, {"b", "three-edge-path"}, {"rounds", 2}});
    json state = get(svc, "/sessions/" + id).body;
    post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, "B", 1));
    state = post(svc, "/sessions/" + id + "/duplicator-auto").body;
    post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, "A", 2));
    before = get(svc, "/sessions/" + id).body;
  }
  GameService restarted(opts);
  CHECK(get(restarted, "/sessions/" + id).body == before);
  // A new session after the restart gets a fresh id.
  CHECK(create(restarted, {{"a", "two-disjoint-edges"}, {"b", "three-edge-path"}, {"rounds", 1}}) != id);
  std::filesystem::remove_all(dir);
}

TEST_CASE("the HTTP binding serves the same API") {
  GameService svc;
  int port = 0;
  std::mutex m;
  std::condition_variable ready;
  std::thread server([&] {
    svc.listen("127.0.0.1", 0, [&](int p) {
      std::lock_guard lock(m);
      port = p;
      ready.notify_all();
    });
  });
  {
    std::unique_lock lock(m);
    ready.wait(lock, [&] { return port != 0; });
  }
  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Post("/sessions", R"({"familyA":"two-disjoint-edges","familyB":"three-edge-path","rounds":2})",
                      "application/json");
  REQUIRE(res);
  CHECK(res->status == 201);
  const json created = json::parse(res->body);
  res = cli.Get("/sessions/" + created["id"].get<std::string>());
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(strip(json::parse(res->body)) == strip(created["state"]));
  res = cli.Get("/generate?family=stcon-log3&param=2");
  REQUIRE(res);
  CHECK(json::parse(res->body)["threshold"] == 9);
  res = cli.Get("/sessions/missing");
  REQUIRE(res);
  CHECK(res->status == 404);
  svc.stop();
  server.join();
}

TEST_CASE("concurrent sessions and readers") {
  GameService svc;
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i)
    ids.push_back(create(svc, {{"a", "two-disjoint-edges"}, {"b", "three-edge-path"}, {"rounds", 2}}));
  std::vector<std::thread> workers;
  std::atomic<int> bad{0};
  for (const std::string& id : ids) {
    workers.emplace_back([&, id] {
      json state = get(svc, "/sessions/" + id).body;
      for (const std::string side : {"A", "B"}) {
        if (post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, side, 3)).status != 200) ++bad;
        state = post(svc, "/sessions/" + id + "/duplicator-auto").body;
      }
      if (state["status"] != "duplicator-won") ++bad;
    });
    workers.emplace_back([&, id] {
      for (int k = 0; k < 20; ++k) {
        const json v = get(svc, "/sessions/" + id).body;
        // A snapshot is always a whole half-move: Duplicator is to move
        // exactly when a Spoiler move is pending.
        if ((v["status"] == "duplicator-to-move") != !v["movedSide"].is_null()) ++bad;
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(bad == 0);
}

TEST_CASE("tree presets with two long branches are playable") {
  GameService svc;
  const std::string id = create(
      svc, {{"a", "two-branch-tree:10,9"}, {"b", "two-branch-tree:9,9"}, {"rounds", 4}});
  const json state = get(svc, "/sessions/" + id).body;
  CHECK(state["sideA"][0]["structure"]["size"] == 18);
  REQUIRE(post(svc, "/sessions/" + id + "/spoiler-move", move_all(state, "A", 0)).status == 200);
  const HttpResponse r = post(svc, "/sessions/" + id + "/duplicator-auto");
  REQUIRE(r.status == 200);
  CHECK(r.body["sideB"].size() == 9);  // root, then one node per depth below it
}
