#pragma once

// First-order formulas: AST, S-expression parser and printer, the three
// syntactic measures, Tarskian evaluation, and syntactic transformations.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qgames/structure.hpp"

namespace qgames {

struct Term {
  enum class Kind { Var, Const };
  Kind kind = Kind::Var;
  std::string name;

  static Term var(std::string n) { return {Kind::Var, std::move(n)}; }
  static Term constant(std::string n) { return {Kind::Const, std::move(n)}; }
  bool operator==(const Term&) const = default;
};

enum class NodeKind { Rel, Eq, Not, And, Or, Implies, Exists, Forall };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Rel;
  std::string rel;                // Rel: relation name
  std::vector<Term> terms;        // Rel, Eq
  std::vector<Formula> children;  // Not (1), And/Or (>= 1), Implies (2), quantifiers (1)
  std::string var;                // quantifiers: bound variable
};

// Constructors.  They check shape only; vocabulary checks happen in
// `check_formula`, `parse` and `evaluate`.
Formula rel(std::string name, std::vector<Term> terms);
Formula lt(const Term& a, const Term& b);
Formula eq(const Term& a, const Term& b);
Formula neq(const Term& a, const Term& b);
Formula lnot(Formula f);
Formula land(std::vector<Formula> fs);
Formula lor(std::vector<Formula> fs);
Formula implies(Formula a, Formula b);
Formula exists(std::string v, Formula body);
Formula forall(std::string v, Formula body);
/// Conjunction of a < b, b < c, ...  (a single atom for two terms).
Formula chain_lt(const std::vector<Term>& terms);
Term var(std::string n);

bool structurally_equal(const Formula& a, const Formula& b);

/// Parses the S-expression grammar.  Names listed as vocabulary constants
/// are constant terms, every other name is a variable.  Relation symbols
/// and arities are checked against the vocabulary.
Formula parse(std::string_view text, const Vocabulary& vocab);
/// Single spaces, no trailing whitespace; parse(print(f)) == f.
std::string print(const Formula& f);

/// Throws InvalidArgument if an atom does not match the vocabulary.
void check_formula(const Formula& f, const Vocabulary& vocab);

std::size_t quants(const Formula& f);
std::size_t qrank(const Formula& f);
/// Number of distinct names bound by quantifier nodes.
std::size_t bound_var_count(const Formula& f);
std::set<std::string> free_vars(const Formula& f);
bool is_sentence(const Formula& f);

/// Alpha-renaming so that at most qrank(f) distinct names are bound.  A
/// binder at quantifier depth d is renamed to the d-th name of the pool;
/// the pool takes the binder names along a deepest quantifier path, so
/// shallower subformulas reuse the names of deeper ones.
Formula minimize_bound_vars(const Formula& f);

/// Leading quantifier string (e.g. "∃∀∃") of a prenex formula, "" for a
/// quantifier-free one, nullopt if not prenex.
std::optional<std::string> prenex_signature(const Formula& f);

enum class Direction { Above, Below };
/// Qx psi becomes Qx((x > pivot) -> psi') for forall and
/// Qx((x > pivot) & psi') for exists (dually for Below).
Formula relativize(const Formula& f, const std::string& pivot, Direction dir,
                   const std::string& order_rel = "<");

/// Renames free occurrences of variables according to `mapping`.  Bound
/// variables are left alone; a mapping target captured by a binder is an
/// InvalidArgument.
Formula rename_free(const Formula& f, const std::map<std::string, std::string>& mapping);

using Assignment = std::map<std::string, Element>;

struct EvalStats {
  /// Every time a quantifier binds its variable.
  std::uint64_t bindings = 0;
  /// Bindings made by quantifiers with no quantifier below them: each one
  /// completes an assignment to every variable in scope.
  std::uint64_t complete_assignments = 0;
};

/// Standard semantics; quantifiers range over 0..n-1 in ascending order
/// with short-circuiting.  Over an empty universe exists is false and
/// forall is true.
bool evaluate(const Structure& s, const Formula& f, const Assignment& env = {},
              EvalStats* stats = nullptr);

/// A formula compiled against one vocabulary, for repeated evaluation.
class CompiledFormula {
 public:
  CompiledFormula(const Formula& f, const Vocabulary& vocab);
  /// Free variables of the formula in the order expected by `run`.
  const std::vector<std::string>& free_variables() const { return free_; }
  bool run(const Structure& s, const std::vector<Element>& free_values = {},
           EvalStats* stats = nullptr) const;

  struct Op;

 private:
  Vocabulary vocab_;
  std::vector<std::string> free_;
  std::size_t slots_ = 0;
  std::shared_ptr<const Op> root_;
};

}  // namespace qgames
