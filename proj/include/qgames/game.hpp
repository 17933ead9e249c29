#pragma once

// Exact solvers for Ehrenfeucht-Fraisse (E-F) and multi-structural (M-S)
// games, and separating-sentence extraction.
//
// M-S games are solved with Duplicator playing obliviously: after a
// Spoiler move on one side, the other side is replaced by every one-point
// extension of every class on it.  Only Spoiler branches.  Classes on a
// side are merged when they have the same (rounds left)-round E-F type;
// any separating sentence with at most that many quantifiers has at most
// that quantifier rank, so merged classes can never be told apart.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qgames/canonical.hpp"
#include "qgames/formula.hpp"
#include "qgames/structure.hpp"
#include "qgames/types.hpp"

namespace qgames {

enum class Player { Spoiler, Duplicator };
enum class Side { A, B };
enum class FirstMove { Any, A, B };

std::string to_string(Player p);
std::string to_string(Side s);

/// Spoiler's move: on `side`, one element for each listed structure.
struct SpoilerMove {
  Side side = Side::A;
  std::vector<Element> choices;
};

struct SolveStats {
  std::size_t states = 0;        // memo entries created
  std::size_t types = 0;         // class identifiers created
  std::size_t max_side = 0;      // largest side seen
};

struct GameOutcome {
  Player winner = Player::Duplicator;
  /// For a Spoiler win: a winning first move (elements per input structure
  /// of the chosen side).
  std::optional<SpoilerMove> witness;
  SolveStats stats;
};

struct MsOptions {
  std::size_t max_classes = 5000;       // classes per side
  std::size_t max_memo = 1'000'000;     // memoized states
  /// Merge classes by E-F type (true) or only by pin-respecting
  /// isomorphism (false, explicit canonical forms).
  bool merge_equivalent = true;
  FirstMove first_move = FirstMove::Any;
  /// Use capped gap vectors as keys for linear orders.
  bool linear_order_fast_path = true;
  CanonOptions canon;
};

/// r-round E-F game on (a, b); constants are pinned from the start.
GameOutcome solve_ef(const Structure& a, const Structure& b, std::size_t r,
                     const MsOptions& opts = {});
/// The E-F game continuing from the pinned positions.
GameOutcome solve_ef(const LabeledStructure& a, const LabeledStructure& b, std::size_t r,
                     const MsOptions& opts = {});

/// Generic E-F search (no linear-order fast path); used to cross-check.
GameOutcome solve_ef_generic(const LabeledStructure& a, const LabeledStructure& b,
                             std::size_t r);

/// Duplicator wins the r-round E-F game from the pinned positions; decided
/// by comparing r-round types.
bool ef_equivalent(const LabeledStructure& a, const LabeledStructure& b, std::size_t r);

GameOutcome solve_ms(const std::vector<LabeledStructure>& set_a,
                     const std::vector<LabeledStructure>& set_b, std::size_t r,
                     const MsOptions& opts = {});
GameOutcome solve_ms(const std::vector<Structure>& set_a, const std::vector<Structure>& set_b,
                     std::size_t r, const MsOptions& opts = {});

/// A sentence with at most r quantifiers true on set_a and false on
/// set_b; throws NoSeparator when Duplicator wins.  Pinned inputs yield a
/// formula whose free variables x1..xk name the pins.
Formula extract_separating_sentence(const std::vector<LabeledStructure>& set_a,
                                    const std::vector<LabeledStructure>& set_b, std::size_t r,
                                    const MsOptions& opts = {});
Formula extract_separating_sentence(const std::vector<Structure>& set_a,
                                    const std::vector<Structure>& set_b, std::size_t r,
                                    const MsOptions& opts = {});

/// Exhaustive search for a prenex sentence with at most r quantifiers
/// over variables x1..xr separating the sets.  Matrices are enumerated
/// semantically, as unions of the complete atomic types realized in the
/// inputs, which covers every quantifier-free matrix.  Throws
/// ResourceLimit if more than `max_atomic_types` types are realized.
std::optional<Formula> find_prenex_separator(const std::vector<Structure>& set_a,
                                             const std::vector<Structure>& set_b, std::size_t r,
                                             std::size_t max_atomic_types = 20);

// ------------------------------------------------------------ search core

/// The abstract setting of the M-S search: opaque class identifiers, each
/// with an atomic type and the classes of its one-point extensions.
class ClassSpace {
 public:
  virtual ~ClassSpace() = default;
  virtual const std::vector<std::uint32_t>& children(std::uint32_t id) = 0;
  virtual AtomicId atomic(std::uint32_t id) = 0;
  virtual std::size_t size() const = 0;
};

/// Memoized M-S search over class-id sets.
class MsSearch {
 public:
  MsSearch(ClassSpace& space, const MsOptions& opts);

  using Set = std::vector<std::uint32_t>;  // sorted, unique

  struct Move {
    Side side;
    /// Chosen child for each class of the moving side (parallel to the
    /// side's sorted class list).
    std::vector<std::uint32_t> choice;
  };

  /// True iff Spoiler wins with `rounds` left.
  bool spoiler_wins(const Set& a, const Set& b, std::size_t rounds,
                    FirstMove constraint = FirstMove::Any);
  /// Winning move of a Spoiler-won state (only valid after spoiler_wins
  /// returned true for the same arguments).
  std::optional<Move> winning_move(const Set& a, const Set& b, std::size_t rounds,
                                   FirstMove constraint = FirstMove::Any);
  Set expand(const Set& side);

  const SolveStats& stats() const { return stats_; }

 private:
  struct Entry {
    bool spoiler;
    std::optional<Move> move;
  };
  bool try_side(const Set& mover, const Set& other, std::size_t rounds, Side side,
                std::optional<Move>& out);
  bool no_partial_iso(const Set& a, const Set& b);
  void check_size(const Set& s);

  ClassSpace& space_;
  MsOptions opts_;
  std::unordered_map<std::vector<std::uint32_t>, Entry, CanonicalKeyHash> memo_;
  SolveStats stats_;
};

/// Class space over E-F types.
class TypeSpace : public ClassSpace {
 public:
  explicit TypeSpace(TypeTable& table) : table_(table) {}
  const std::vector<std::uint32_t>& children(std::uint32_t id) override {
    return table_.children(id);
  }
  AtomicId atomic(std::uint32_t id) override { return table_.atomic(id); }
  std::size_t size() const override { return table_.type_count(); }

 private:
  TypeTable& table_;
};

/// Class space over pin-respecting isomorphism classes.
class ExplicitSpace : public ClassSpace {
 public:
  ExplicitSpace(TypeTable& table, CanonOptions canon) : table_(table), canon_(canon) {}
  std::uint32_t class_of(const LabeledStructure& a);
  const std::vector<std::uint32_t>& children(std::uint32_t id) override;
  AtomicId atomic(std::uint32_t id) override { return atomic_[id]; }
  std::size_t size() const override { return reps_.size(); }
  const LabeledStructure& representative(std::uint32_t id) const { return reps_[id]; }

 private:
  TypeTable& table_;
  CanonOptions canon_;
  std::unordered_map<CanonicalKey, std::uint32_t, CanonicalKeyHash> ids_;
  std::vector<LabeledStructure> reps_;
  std::vector<AtomicId> atomic_;
  std::vector<std::optional<std::vector<std::uint32_t>>> children_;
};

}  // namespace qgames
