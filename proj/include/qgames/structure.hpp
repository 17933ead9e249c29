#pragma once

// Finite relational structures over a universe 0..n-1, pinned ("labeled")
// structures, and builders for the structure families used by the games.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qgames {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

struct RelationSymbol {
  std::string name;
  std::size_t arity = 2;
  bool operator==(const RelationSymbol&) const = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<RelationSymbol> relations,
             std::vector<std::string> constants = {});

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<std::string>& constants() const { return constants_; }
  std::optional<std::size_t> relation_index(std::string_view name) const;
  std::optional<std::size_t> constant_index(std::string_view name) const;

  bool operator==(const Vocabulary&) const = default;

  /// {<}
  static Vocabulary order();
  /// {E}
  static Vocabulary graph();
  /// {E; s, t}
  static Vocabulary graph_st();

 private:
  std::vector<RelationSymbol> relations_;
  std::vector<std::string> constants_;
};

class Structure {
 public:
  Structure() = default;
  /// Tables are per relation (in vocabulary order); duplicates are dropped.
  /// Throws InvalidArgument on any out-of-range or wrong-arity tuple.
  Structure(Vocabulary vocab, std::size_t size,
            std::vector<std::vector<Tuple>> tables,
            std::vector<Element> constants = {});

  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t size() const { return size_; }
  /// Sorted, duplicate free.
  const std::vector<Tuple>& tuples(std::size_t rel) const { return tables_[rel]; }
  const std::vector<Element>& constants() const { return constants_; }
  Element constant(std::size_t i) const { return constants_[i]; }

  bool holds(std::size_t rel, std::span<const Element> args) const;
  bool holds(std::size_t rel, Element a, Element b) const {
    const Element args[2] = {a, b};
    return holds(rel, args);
  }

  bool operator==(const Structure& o) const {
    return vocab_ == o.vocab_ && size_ == o.size_ && tables_ == o.tables_ &&
           constants_ == o.constants_;
  }

 private:
  void build_index();

  Vocabulary vocab_;
  std::size_t size_ = 0;
  std::vector<std::vector<Tuple>> tables_;
  std::vector<Element> constants_;
  // Dense membership bitmaps, empty when n^arity is too large.
  std::vector<std::vector<std::uint64_t>> dense_;
};

using StructurePtr = std::shared_ptr<const Structure>;

/// A structure together with the elements pinned in rounds 1, 2, ...
struct LabeledStructure {
  StructurePtr base;
  std::vector<Element> pins;

  LabeledStructure() = default;
  explicit LabeledStructure(Structure s, std::vector<Element> pins = {});
  LabeledStructure(StructurePtr s, std::vector<Element> pins = {});

  const Structure& structure() const { return *base; }
  LabeledStructure extended(Element e) const;
};

/// Rooted tree given by its parent map.  Exactly one node has no parent.
class TreeSpec {
 public:
  static constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

  explicit TreeSpec(std::vector<std::size_t> parent);

  std::size_t size() const { return parent_.size(); }
  std::size_t parent(std::size_t node) const { return parent_[node]; }
  std::size_t root() const { return root_; }
  const std::vector<std::size_t>& parents() const { return parent_; }

  /// Path tree root -> ... -> leaf with `nodes` nodes.
  static TreeSpec path(std::size_t nodes);

 private:
  std::vector<std::size_t> parent_;
  std::size_t root_ = 0;
};

Structure make_linear_order(std::size_t k);
/// a < b iff b is a strict ancestor of a (the root is the largest element).
Structure make_tree(const TreeSpec& spec);
/// Node-count depth: a single node has depth 1.
std::size_t tree_depth(const TreeSpec& spec);
/// Root with two disjoint downward paths; len1 + len2 - 1 nodes in total.
TreeSpec two_branch_tree(std::size_t len1, std::size_t len2);
/// Main branch of `main_length` nodes where every main-branch node except
/// the leaf also carries a pendant path of `offshoot_length` nodes.
TreeSpec decorated_tree(std::size_t main_length, std::size_t offshoot_length);

Structure disjoint_union(std::span<const Structure> parts);
Structure delete_element(const Structure& s, Element p);
/// New node (index c.size()) with an edge to every old node.
Structure apex_extension(const Structure& c);

/// Directed path s = 0 -> 1 -> ... -> t = length over {E; s, t}.
Structure directed_path(std::size_t length);

/// The two digraphs of the introductory example: A is two disjoint edges
/// 0->1, 2->3; B is the directed path 0->1->2->3.  B has a vertex with both
/// an in-edge and an out-edge, A does not.
Structure two_disjoint_edges();
Structure three_edge_path();

bool partial_isomorphism(const LabeledStructure& a, const LabeledStructure& b);

/// True iff the relation of a single-binary-relation structure is a strict
/// total order.  Fills `rank` (rank[e] = number of elements below e).
bool is_linear_order(const Structure& s, std::vector<std::size_t>* rank = nullptr);

}  // namespace qgames
