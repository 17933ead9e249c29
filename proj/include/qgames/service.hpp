#pragma once

// HTTP façade over game sessions, generators, growth tables and the
// evaluator.
//
// Endpoints (JSON in, JSON out):
//   POST /sessions                      {a, b, rounds, humanRole} -> 201 {id, state}
//   GET  /sessions/{id}                 -> state view
//   POST /sessions/{id}/spoiler-move    {side, choices: [{classIndex, element}]}
//   POST /sessions/{id}/duplicator-auto
//   POST /sessions/{id}/engine-spoiler  -> state view + engineMove
//   GET  /sessions/{id}/hint            -> the engine's move, not played
//   GET  /sessions/{id}/separator       -> separating sentence of a Spoiler-won game
//   GET  /generate?family=..&param=..   -> {formula, quants, rank, threshold}
//   GET  /tables?maxR=..                -> {rows}
//   POST /evaluate                      {structure, formula} -> {value}
//
// Sessions are kept in memory.  With a persistence directory each session
// is an append-only file <id>.jsonl: the setup on the first line, then one
// line per half-move; construction replays every file found there.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"
#include "qgames/session.hpp"

namespace httplib {
class Server;
}

namespace qgames {

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  SessionOptions session;
  std::optional<std::filesystem::path> persist_dir;
  /// Largest max-r accepted by /tables.
  std::size_t max_table_r = 200;
};

/// A structure preset name, e.g. "linear-order:4", "two-branch-tree:10,9",
/// "path-tree:5", "directed-path:3", "two-disjoint-edges", "three-edge-path".
Structure structure_preset(const std::string& name);

nlohmann::json session_view(const std::string& id, const GameSession& g);
nlohmann::json logged_move_to_json(const LoggedMove& m);
LoggedMove logged_move_from_json(const nlohmann::json& j);

class GameService {
 public:
  explicit GameService(ServiceOptions opts = {});
  ~GameService();

  /// Routes one request; never throws.
  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::map<std::string, std::string>& query,
                      const std::string& body);

  /// Serves until stop() is called.  Port 0 picks a free port, reported
  /// through `on_ready` before the first request is accepted.
  void listen(const std::string& host, int port,
              const std::function<void(int)>& on_ready = {});
  void stop();

  /// Rebuilds a session from its setup and log (as stored on disk).
  static GameSession replay(const nlohmann::json& setup, const nlohmann::json& log,
                            const SessionOptions& opts);

 private:
  struct Record {
    std::mutex mutex;
    nlohmann::json setup;
    std::string created_at;
    std::unique_ptr<GameSession> game;
  };

  HttpResponse create(const nlohmann::json& body);
  HttpResponse session_op(const std::string& id, const std::string& op,
                          const std::string& method, const nlohmann::json& body);
  std::shared_ptr<Record> find(const std::string& id);
  void persist_setup(const std::string& id, const Record& r);
  void persist_moves(const std::string& id, const GameSession& g, std::size_t from);
  void load_persisted();
  nlohmann::json view(const std::string& id, const Record& r) const;

  ServiceOptions opts_;
  std::mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Record>> sessions_;
  std::size_t next_id_ = 1;
  std::mutex server_mutex_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace qgames
