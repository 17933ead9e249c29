#include "qgames/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "qgames/formula.hpp"
#include "qgames/generators.hpp"
#include "qgames/growth.hpp"
#include "qgames/io.hpp"

namespace qgames {

using nlohmann::json;

namespace {

class BadRequest : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string side_name(Side s) { return s == Side::A ? "A" : "B"; }

Side parse_side(const json& j) {
  const std::string s = j.is_string() ? j.get<std::string>() : "";
  if (s == "A" || s == "a") return Side::A;
  if (s == "B" || s == "b") return Side::B;
  throw BadRequest("side must be \"A\" or \"B\"");
}

Player parse_player(const std::string& s) {
  if (s == "spoiler" || s == "Spoiler") return Player::Spoiler;
  if (s == "duplicator" || s == "Duplicator") return Player::Duplicator;
  throw BadRequest("humanRole must be \"spoiler\" or \"duplicator\"");
}

json big_to_json(const BigInt& v) {
  if (v <= std::numeric_limits<std::int64_t>::max()) return static_cast<std::int64_t>(v);
  return v.str();
}

std::vector<std::size_t> numbers(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("bad preset parameter '" + text + "'");
    out.push_back(std::stoul(item));
  }
  return out;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos)
    throw BadRequest(what + " must be a non-negative integer");
  return std::stoul(text);
}

// A side of a new session: a preset name, a structure document, a
// {structure, pins} pair, or a list of these.  Normalized to a list of
// {structure, pins}.
json normalize_side(const json& j) {
  json out = json::array();
  auto one = [&](const json& item) {
    if (item.is_string()) {
      out.push_back({{"structure", structure_to_json(structure_preset(item.get<std::string>()))},
                     {"pins", json::array()}});
    } else if (item.is_object() && item.contains("structure")) {
      const json& s = item.at("structure");
      const Structure st = s.is_string() ? structure_preset(s.get<std::string>())
                                         : structure_from_json(s);
      out.push_back({{"structure", structure_to_json(st)},
                     {"pins", item.value("pins", json::array())}});
    } else if (item.is_object()) {
      out.push_back({{"structure", structure_to_json(structure_from_json(item))},
                     {"pins", json::array()}});
    } else {
      throw BadRequest("a side lists presets or structure documents");
    }
  };
  if (j.is_array()) {
    for (const json& item : j) one(item);
  } else {
    one(j);
  }
  if (out.empty()) throw BadRequest("a side needs at least one structure");
  return out;
}

std::vector<LabeledStructure> side_structures(const json& side) {
  std::vector<LabeledStructure> out;
  for (const json& item : side) {
    std::vector<Element> pins;
    try {
      pins = item.at("pins").get<std::vector<Element>>();
    } catch (const json::exception&) {
      throw BadRequest("pins must be a list of elements");
    }
    out.emplace_back(structure_from_json(item.at("structure")), std::move(pins));
  }
  return out;
}

std::vector<ClassChoice> parse_choices(const json& j) {
  if (!j.is_array()) throw BadRequest("choices must be a list");
  std::vector<ClassChoice> out;
  for (const json& c : j) {
    if (!c.is_object() || !c.contains("classIndex") || !c.contains("element"))
      throw BadRequest("each choice needs classIndex and element");
    const json& ci = c.at("classIndex");
    const json& el = c.at("element");
    if (!ci.is_number_integer() || !el.is_number_integer())
      throw BadRequest("classIndex and element must be integers");
    // Negative or huge values are legal JSON but never legal moves.
    if (ci.get<std::int64_t>() < 0 || el.get<std::int64_t>() < 0 ||
        el.get<std::int64_t>() > std::numeric_limits<Element>::max())
      throw IllegalMove("classIndex and element must be valid indices");
    out.push_back({ci.get<std::size_t>(), el.get<Element>()});
  }
  return out;
}

json choices_to_json(const std::vector<ClassChoice>& choices) {
  json out = json::array();
  for (const ClassChoice& c : choices)
    out.push_back({{"classIndex", c.class_index}, {"element", c.element}});
  return out;
}

json side_view(const std::vector<SessionClass>& side) {
  json out = json::array();
  for (const SessionClass& c : side)
    out.push_back({{"index", c.index},
                   {"structure", structure_to_json(c.value.structure())},
                   {"pins", c.value.pins}});
  return out;
}

json engine_move_json(const EngineMove& m) {
  json j = {{"side", side_name(m.side)},
            {"choices", choices_to_json(m.choices)},
            {"exact", m.exact},
            {"source", m.exact && m.solver_winner == Player::Spoiler ? "solver" : "heuristic"},
            {"solverWinner", m.solver_winner ? json(to_string(*m.solver_winner)) : json()}};
  if (!m.budget.empty()) j["budget"] = m.budget;
  return j;
}

std::string now_iso8601() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

HttpResponse error(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

}  // namespace

Structure structure_preset(const std::string& name) {
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::vector<std::size_t> args =
      colon == std::string::npos ? std::vector<std::size_t>{} : numbers(name.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw InvalidArgument("preset '" + kind + "' takes " + std::to_string(n) + " parameter(s)");
  };
  if (kind == "linear-order") {
    need(1);
    return make_linear_order(args[0]);
  }
  if (kind == "two-branch-tree") {
    need(2);
    return make_tree(two_branch_tree(args[0], args[1]));
  }
  if (kind == "path-tree") {
    need(1);
    return make_tree(TreeSpec::path(args[0]));
  }
  if (kind == "directed-path") {
    need(1);
    return directed_path(args[0]);
  }
  if (kind == "two-disjoint-edges") {
    need(0);
    return two_disjoint_edges();
  }
  if (kind == "three-edge-path") {
    need(0);
    return three_edge_path();
  }
  throw InvalidArgument("unknown structure preset '" + name + "'");
}

json session_view(const std::string& id, const GameSession& g) {
  const auto w = g.winner();
  return {{"id", id},
          {"rounds", g.rounds()},
          {"roundsLeft", g.rounds_left()},
          {"status", to_string(g.status())},
          {"winner", w ? json(to_string(*w)) : json()},
          {"humanRole", to_string(g.human_role())},
          {"movedSide", g.moved_side() ? json(side_name(*g.moved_side())) : json()},
          {"moves", g.log().size()},
          {"sideA", side_view(g.side(Side::A))},
          {"sideB", side_view(g.side(Side::B))}};
}

json logged_move_to_json(const LoggedMove& m) {
  if (m.kind == LoggedMove::Kind::DuplicatorAuto)
    return {{"op", "duplicator-auto"}, {"side", side_name(m.side)}};
  return {{"op", "spoiler-move"}, {"side", side_name(m.side)}, {"choices", choices_to_json(m.choices)}};
}

LoggedMove logged_move_from_json(const json& j) {
  LoggedMove m;
  const std::string op = j.at("op").get<std::string>();
  m.side = parse_side(j.at("side"));
  if (op == "duplicator-auto") {
    m.kind = LoggedMove::Kind::DuplicatorAuto;
  } else if (op == "spoiler-move") {
    m.kind = LoggedMove::Kind::SpoilerMove;
    m.choices = parse_choices(j.at("choices"));
  } else {
    throw InvalidArgument("unknown logged move '" + op + "'");
  }
  return m;
}

GameService::GameService(ServiceOptions opts) : opts_(std::move(opts)) {
  if (opts_.persist_dir) {
    std::filesystem::create_directories(*opts_.persist_dir);
    load_persisted();
  }
}

GameService::~GameService() = default;

GameSession GameService::replay(const json& setup, const json& log, const SessionOptions& opts) {
  GameSession g(side_structures(setup.at("a")), side_structures(setup.at("b")),
                setup.at("rounds").get<std::size_t>(),
                parse_player(setup.at("humanRole").get<std::string>()), opts);
  for (const json& m : log) g.apply(logged_move_from_json(m));
  return g;
}

void GameService::load_persisted() {
  for (const auto& entry : std::filesystem::directory_iterator(*opts_.persist_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    if (!std::getline(in, line)) continue;
    const json head = json::parse(line);
    json log = json::array();
    while (std::getline(in, line))
      if (!line.empty()) log.push_back(json::parse(line));
    auto rec = std::make_shared<Record>();
    rec->setup = head.at("setup");
    rec->created_at = head.value("createdAt", "");
    rec->game = std::make_unique<GameSession>(replay(rec->setup, log, opts_.session));
    const std::string id = entry.path().stem().string();
    sessions_[id] = rec;
    if (id.size() > 1 && id[0] == 's' && id.find_first_not_of("0123456789", 1) == std::string::npos)
      next_id_ = std::max(next_id_, std::stoul(id.substr(1)) + 1);
  }
}

void GameService::persist_setup(const std::string& id, const Record& r) {
  if (!opts_.persist_dir) return;
  std::ofstream out(*opts_.persist_dir / (id + ".jsonl"));
  out << json{{"setup", r.setup}, {"createdAt", r.created_at}}.dump() << "\n";
}

void GameService::persist_moves(const std::string& id, const GameSession& g, std::size_t from) {
  if (!opts_.persist_dir) return;
  std::ofstream out(*opts_.persist_dir / (id + ".jsonl"), std::ios::app);
  for (std::size_t i = from; i < g.log().size(); ++i)
    out << logged_move_to_json(g.log()[i]).dump() << "\n";
}

json GameService::view(const std::string& id, const Record& r) const {
  json v = session_view(id, *r.game);
  v["createdAt"] = r.created_at;
  return v;
}

std::shared_ptr<GameService::Record> GameService::find(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

HttpResponse GameService::create(const json& body) {
  if (!body.is_object()) throw BadRequest("expected a JSON object");
  auto pick = [&](const char* k1, const char* k2) -> const json& {
    if (body.contains(k1)) return body.at(k1);
    if (body.contains(k2)) return body.at(k2);
    throw BadRequest(std::string("missing '") + k1 + "'");
  };
  auto rec = std::make_shared<Record>();
  const json& rounds = pick("rounds", "r");
  if (!rounds.is_number_unsigned()) throw BadRequest("rounds must be a non-negative integer");
  rec->setup = {{"a", normalize_side(pick("familyA", "a"))},
                {"b", normalize_side(pick("familyB", "b"))},
                {"rounds", rounds},
                {"humanRole", to_string(parse_player(body.value("humanRole", "spoiler")))}};
  rec->created_at = now_iso8601();
  rec->game = std::make_unique<GameSession>(replay(rec->setup, json::array(), opts_.session));
  std::string id;
  {
    std::lock_guard lock(sessions_mutex_);
    id = "s" + std::to_string(next_id_++);
    sessions_[id] = rec;
  }
  std::lock_guard lock(rec->mutex);
  persist_setup(id, *rec);
  return {201, {{"id", id}, {"state", view(id, *rec)}}};
}

HttpResponse GameService::session_op(const std::string& id, const std::string& op,
                                     const std::string& method, const json& body) {
  const auto rec = find(id);
  std::lock_guard lock(rec->mutex);
  GameSession& g = *rec->game;
  auto require = [&](const char* m) {
    if (method != m) throw NotFound(method + " is not supported on " + op);
  };
  if (op.empty()) {
    require("GET");
    return {200, view(id, *rec)};
  }
  if (op == "hint") {
    require("GET");
    return {200, {{"engineMove", engine_move_json(g.engine_suggestion())}}};
  }
  if (op == "separator") {
    require("GET");
    if (g.status() != SessionStatus::SpoilerWon)
      throw WrongTurn("a separator is offered once Spoiler has won");
    const Formula f = extract_separating_sentence(side_structures(rec->setup.at("a")),
                                                  side_structures(rec->setup.at("b")),
                                                  g.rounds(), opts_.session.solver);
    return {200, {{"formula", print(f)}, {"quants", quants(f)}, {"rank", qrank(f)}}};
  }
  require("POST");
  // Work on a copy so a failing move leaves the session untouched.
  GameSession next = g;
  json extra;
  if (op == "spoiler-move") {
    if (!body.is_object() || !body.contains("side")) throw BadRequest("missing 'side'");
    next.spoiler_move(parse_side(body.at("side")), parse_choices(body.value("choices", json::array())));
  } else if (op == "duplicator-auto") {
    next.duplicator_auto();
  } else if (op == "engine-spoiler") {
    extra = engine_move_json(next.engine_spoiler());
  } else {
    throw NotFound("unknown session operation '" + op + "'");
  }
  const std::size_t from = g.log().size();
  g = std::move(next);
  persist_moves(id, g, from);
  json v = view(id, *rec);
  if (!extra.is_null()) v["engineMove"] = extra;
  return {200, v};
}

HttpResponse GameService::handle(const std::string& method, const std::string& path,
                                 const std::map<std::string, std::string>& query,
                                 const std::string& body) {
  try {
    std::vector<std::string> parts;
    {
      std::stringstream ss(path);
      std::string item;
      while (std::getline(ss, item, '/'))
        if (!item.empty()) parts.push_back(item);
    }
    auto parse_body = [&]() -> json {
      if (body.empty()) return json::object();
      try {
        return json::parse(body);
      } catch (const json::exception& e) {
        throw BadRequest(std::string("malformed JSON: ") + e.what());
      }
    };
    auto param = [&](const std::string& k) -> const std::string& {
      const auto it = query.find(k);
      if (it == query.end()) throw BadRequest("missing query parameter '" + k + "'");
      return it->second;
    };
    if (parts.empty()) throw NotFound("no route");
    if (parts[0] == "sessions") {
      if (parts.size() == 1) {
        if (method != "POST") throw NotFound("use POST /sessions");
        return create(parse_body());
      }
      if (parts.size() > 3) throw NotFound("no route " + path);
      return session_op(parts[1], parts.size() == 3 ? parts[2] : "", method, parse_body());
    }
    if (parts.size() != 1) throw NotFound("no route " + path);
    if (parts[0] == "generate" && method == "GET") {
      const GeneratedSentence s =
          generate(param("family"), parse_count(param("param"), "param"));
      return {200,
              {{"family", param("family")},
               {"param", s.parameter},
               {"formula", print(s.formula)},
               {"quants", quants(s.formula)},
               {"rank", qrank(s.formula)},
               {"threshold", s.threshold ? big_to_json(*s.threshold) : json()}}};
    }
    if (parts[0] == "tables" && method == "GET") {
      const std::size_t max_r = parse_count(param("maxR"), "maxR");
      if (max_r > opts_.max_table_r)
        throw BadRequest("maxR must be at most " + std::to_string(opts_.max_table_r));
      json rows = json::array();
      for (const GrowthRow& row : growth_table(max_r)) {
        json j = {{"r", row.r}, {"f", big_to_json(row.f)}, {"g", big_to_json(row.g)},
                  {"t", big_to_json(row.t)}};
        j["gForall"] = row.r % 2 == 1 && row.r >= 3 ? big_to_json(g_forall(row.r)) : json();
        j["gExists"] = row.r % 2 == 0 && row.r >= 4 ? big_to_json(g_exists(row.r)) : json();
        rows.push_back(std::move(j));
      }
      return {200, {{"rows", rows}}};
    }
    if (parts[0] == "evaluate" && method == "POST") {
      const json j = parse_body();
      if (!j.is_object() || !j.contains("structure") || !j.contains("formula") ||
          !j.at("formula").is_string())
        throw BadRequest("expected {structure, formula}");
      const json& sj = j.at("structure");
      const Structure s =
          sj.is_string() ? structure_preset(sj.get<std::string>()) : structure_from_json(sj);
      const Formula f = parse(j.at("formula").get<std::string>(), s.vocabulary());
      return {200, {{"value", evaluate(s, f)}}};
    }
    throw NotFound("no route " + method + " " + path);
  } catch (const NotFound& e) {
    return error(404, e.what());
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const ParseError& e) {
    return error(400, e.what());
  } catch (const IllegalMove& e) {
    return error(422, e.what());
  } catch (const WrongTurn& e) {
    return error(409, e.what());
  } catch (const NoSeparator& e) {
    return error(409, e.what());
  } catch (const ResourceLimit& e) {
    HttpResponse r = error(429, e.what());
    r.body["budget"] = e.budget();
    return r;
  } catch (const InvalidArgument& e) {
    return error(400, e.what());
  } catch (const json::exception& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

void GameService::listen(const std::string& host, int port,
                         const std::function<void(int)>& on_ready) {
  {
    std::lock_guard lock(server_mutex_);
    server_ = std::make_unique<httplib::Server>();
  }
  httplib::Server& server = *server_;
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const HttpResponse out = handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Get(".*", route);
  server.Post(".*", route);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (port == 0) port = server.bind_to_any_port(host);
  else if (!server.bind_to_port(host, port)) port = -1;
  if (port < 0) throw InvalidArgument("cannot bind " + host);
  if (on_ready) on_ready(port);
  server.listen_after_bind();
}

void GameService::stop() {
  std::lock_guard lock(server_mutex_);
  if (server_) server_->stop();
}

}  // namespace qgames
