#pragma once

// Stepwise multi-structural games for interactive play.
//
// A round is a Spoiler half-move (one element for every class on one
// side) followed by Duplicator's oblivious answer: every class on the other
// side is replaced by all of its one-point extensions.  After each
// half-move the classes of a side are deduplicated by pin-respecting
// isomorphism.  Every class carries an index that never changes while the
// class survives; classes created by an expansion get fresh indices, so a
// client's choices stay attached to the right class however the list is
// reordered.

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"
#include "qgames/game.hpp"
#include "qgames/structure.hpp"

namespace qgames {

/// A move was submitted out of turn.
class WrongTurn : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// The game is already over.
class SessionFinished : public WrongTurn {
 public:
  using WrongTurn::WrongTurn;
};
/// A move names an unknown class or an element outside its structure.
class IllegalMove : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

enum class SessionStatus { SpoilerToMove, DuplicatorToMove, SpoilerWon, DuplicatorWon };
std::string to_string(SessionStatus s);

struct SessionClass {
  std::size_t index = 0;
  LabeledStructure value;
};

struct ClassChoice {
  std::size_t class_index = 0;
  Element element = 0;
  bool operator==(const ClassChoice&) const = default;
};

/// One applied half-move; the log of these replays the session.
struct LoggedMove {
  enum class Kind { SpoilerMove, DuplicatorAuto } kind = Kind::SpoilerMove;
  Side side = Side::A;
  std::vector<ClassChoice> choices;
  bool operator==(const LoggedMove&) const = default;
};

/// The engine's Spoiler move and where it came from.
struct EngineMove {
  Side side = Side::A;
  std::vector<ClassChoice> choices;
  /// True when the exact solver decided the position; then `solver_winner`
  /// is its verdict.  A Spoiler verdict means the move is the solver's
  /// winning move; otherwise the move is heuristic.
  bool exact = false;
  std::optional<Player> solver_winner;
  /// Set when the solver gave up; names the exceeded budget.
  std::string budget;
};

struct SessionOptions {
  /// Solver settings for engine moves.
  MsOptions solver;
  /// Largest number of classes per side after a half-move.
  std::size_t max_classes = 5000;
  /// Canonicalization limits used for deduplication.
  CanonOptions canon{40, 2'000'000};
};

class GameSession {
 public:
  GameSession(const std::vector<LabeledStructure>& set_a,
              const std::vector<LabeledStructure>& set_b, std::size_t rounds,
              Player human_role, SessionOptions opts = {});

  std::size_t rounds() const { return rounds_; }
  std::size_t rounds_left() const { return rounds_left_; }
  SessionStatus status() const { return status_; }
  std::optional<Player> winner() const;
  Player human_role() const { return human_role_; }
  const std::vector<SessionClass>& side(Side s) const { return s == Side::A ? a_ : b_; }
  /// Side of the pending Spoiler move while Duplicator is to move.
  std::optional<Side> moved_side() const { return moved_; }
  const std::vector<LoggedMove>& log() const { return log_; }
  const SessionOptions& options() const { return opts_; }

  /// A Spoiler move submitted by the human player.
  void spoiler_move(Side side, const std::vector<ClassChoice>& choices);
  /// Duplicator's oblivious answer to the pending Spoiler move.
  void duplicator_auto();
  /// The engine's move in the current position, without playing it.
  EngineMove engine_suggestion() const;
  /// Computes and plays the engine's move.
  EngineMove engine_spoiler();
  /// The lexicographically smallest move that maximizes the number of
  /// (A-class, B-class) pairs that no Duplicator answer keeps partially
  /// isomorphic.
  SpoilerMove heuristic_move() const;

  /// Applies a logged half-move (used for replay; skips the human-role check).
  void apply(const LoggedMove& m);

 private:
  void play_spoiler(Side side, const std::vector<ClassChoice>& choices);
  void add_class(std::vector<SessionClass>& side, std::vector<CanonicalKey>& keys,
                 std::size_t index, LabeledStructure value);
  void check_terminal();
  CanonicalKey key(const LabeledStructure& x) const;

  std::size_t rounds_;
  std::size_t rounds_left_;
  Player human_role_;
  SessionOptions opts_;
  SessionStatus status_ = SessionStatus::SpoilerToMove;
  std::optional<Side> moved_;
  std::vector<SessionClass> a_, b_;
  std::vector<CanonicalKey> a_keys_, b_keys_;
  std::size_t next_index_ = 0;
  std::vector<LoggedMove> log_;
};

}  // namespace qgames
