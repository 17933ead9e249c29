#pragma once

// Interned atomic types and r-round Ehrenfeucht-Fraisse types of labeled
// structures.
//
// The atomic type of a labeled structure is its partial-isomorphism type:
// the equalities and relation facts among pins followed by constants.  The
// k-round type is defined by type_0 = atomic type and
//   type_k = (atomic type, { type_{k-1}(a, e) : e in the universe }),
// so two labeled structures have the same k-round type iff Duplicator wins
// the k-round E-F game from their pinned position.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgames/formula.hpp"
#include "qgames/structure.hpp"

namespace qgames {

using TypeId = std::uint32_t;
using AtomicId = std::uint32_t;

/// Partial-isomorphism type of a tuple of `pins` pins followed by the
/// constants.
struct AtomicInfo {
  std::size_t pins = 0;
  std::size_t terms = 0;  // pins + constants
  /// Bits for x_i = x_j (i < j), then for every relation the truth value
  /// on every index tuple in lexicographic order.
  std::vector<std::uint8_t> bits;
  bool operator<(const AtomicInfo& o) const {
    return std::tie(pins, terms, bits) < std::tie(o.pins, o.terms, o.bits);
  }
};

/// A single literal over pin variables x1.. and constants.
struct Literal {
  bool positive = true;
  bool is_equality = false;
  std::size_t rel = 0;
  std::vector<std::size_t> args;  // term indices
};

class TypeTable {
 public:
  explicit TypeTable(Vocabulary vocab, bool linear_order_fast_path = true);

  const Vocabulary& vocabulary() const { return vocab_; }

  AtomicId atomic_of(const LabeledStructure& a);
  const AtomicInfo& atomic_info(AtomicId id) const { return atomics_[id]; }

  /// k-round type of the labeled structure.
  TypeId type_of(const LabeledStructure& a, std::size_t k);

  std::size_t level(TypeId t) const { return types_[t].level; }
  AtomicId atomic(TypeId t) const { return types_[t].atomic; }
  /// Sorted (k-1)-round types of all one-point extensions.
  const std::vector<TypeId>& children(TypeId t) const { return types_[t].children; }

  std::size_t type_count() const { return types_.size(); }

  /// All literals that hold in the atomic type, in a fixed order.
  std::vector<Literal> literals(AtomicId id) const;
  bool literal_holds(const Literal& lit, AtomicId id) const;
  /// Literal as a formula; term i < pins is variable x{i+1}, later terms
  /// are constants.
  Formula literal_formula(const Literal& lit, std::size_t pins) const;

 private:
  struct TypeRecord {
    std::size_t level;
    AtomicId atomic;
    std::vector<TypeId> children;
  };

  TypeId intern(std::size_t level, AtomicId atomic, std::vector<TypeId> children);
  TypeId order_type(const LabeledStructure& a, std::size_t k);
  StructurePtr order_of_size(std::size_t n);
  bool is_order(const StructurePtr& s);

  Vocabulary vocab_;
  bool lo_fast_;
  std::map<AtomicInfo, AtomicId> atomic_ids_;
  std::vector<AtomicInfo> atomics_;
  std::map<std::tuple<std::size_t, AtomicId, std::vector<TypeId>>, TypeId> type_ids_;
  std::vector<TypeRecord> types_;
  std::map<std::vector<std::uint32_t>, TypeId> order_memo_;
  std::map<std::size_t, StructurePtr> orders_;
  std::map<std::pair<const Structure*, std::vector<Element>>, TypeId> generic_memo_;
  // Keeps structures whose addresses are used as memo keys alive.
  std::map<const Structure*, StructurePtr> alive_;
  std::map<const Structure*, bool> order_cache_;
};

/// Each gap between consecutive distinct pins, and the two end gaps, is
/// shortened to min(gap, 2^r - 1).  The result is r-round E-F equivalent
/// (an order with no pins capped at r = 0 keeps one element).
LabeledStructure gap_cap_linear_order(const LabeledStructure& a, std::size_t r);

}  // namespace qgames
