#pragma once

// Generators for the distinguishing-sentence families: linear orders,
// rooted trees, s-t connectivity, and the rank-versus-count example.
//
// Every generated sentence names its variables x1, x2, ... in binding
// order.  Alternating families are built from a few combinators on prenex
// sentences over {<}:
//   both(S)    "some p has an S-order on each side"      2T + 1
//   either(S)  "every p has an S-order on one side"      2T
//   lift(U)    "every p has something above, or a U-tree below"
//   tree(P, U) "some p has a P-order above and a U-tree below"
// where T is the threshold of S.  Each combinator adds one quantifier.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qgames/formula.hpp"
#include "qgames/growth.hpp"

namespace qgames {

enum class Family { LinearOrder, Tree, StconLog2, StconLog3, Theorem31 };

std::string to_string(Family f);

struct GeneratedSentence {
  Formula formula;
  Family family = Family::LinearOrder;
  std::size_t parameter = 0;
  /// Size, depth or distance threshold the sentence realizes; none for
  /// the rank-versus-count family.
  std::optional<BigInt> threshold;
};

/// Prenex sentence with signature ∀∃···∀∃∃ and r quantifiers (r odd, r >= 3),
/// true on l.o.(k) iff k >= g_forall(r).
GeneratedSentence gen_lo_forall(std::size_t r);
/// Prenex sentence with signature ∃∀···∃∀∃∃ and r quantifiers (r even,
/// r >= 4), true on l.o.(k) iff k >= g_exists(r).  No optimal g(4) = 10
/// sentence here: r = 4 gives the threshold-9 sentence.
GeneratedSentence gen_lo_exists(std::size_t r);
/// Sentence with r quantifiers (r >= 1) realizing g(r) on linear orders;
/// even r >= 4 gives signature ∀∃···∀∃, odd r >= 5 gives ∃∀···∀∃.
GeneratedSentence gen_lo_optimal(std::size_t r);

/// Sentence with r quantifiers (r >= 2) meant to hold on rooted trees of
/// depth >= t(r): ∃x∃y(x<y) for r = 2, the ∃∀∃ depth-4 sentence for r = 3,
/// the ∃∀∃∃ depth-8 sentence for r = 4, and tree(P, lift(...)) above.
GeneratedSentence gen_tree_sentence(std::size_t r);
/// ∀-led tree sentence with r quantifiers (r >= 3), threshold t(r-1) + 1.
GeneratedSentence gen_tree_forall(std::size_t r);

/// Over {E; s, t}: 2m+1 quantifiers, true iff d(s,t) <= 2^(m+1).
GeneratedSentence gen_stcon_log2(std::size_t m);
/// Over {E; s, t}: 3m-1 quantifiers, true iff d(s,t) <= 3^m.
GeneratedSentence gen_stcon_log3(std::size_t m);

/// Conjunction over all (k-1)-node digraphs C of "there are k distinct
/// elements spanning an induced copy of C plus an apex with an edge to
/// each of its nodes".  Quantifier rank k, k * f(k-1) quantifiers.
/// Throws ResourceLimit("theorem31-k") for k > max_k.
GeneratedSentence gen_theorem31(std::size_t k, std::size_t max_k = 4);

/// Dispatch by CLI family name: lo-forall, lo-exists, lo-optimal, tree,
/// tree-forall, stcon-log2, stcon-log3, theorem31.
GeneratedSentence generate(const std::string& family, std::size_t param);
std::vector<std::string> family_names();

}  // namespace qgames
