#pragma once

// The scripted Duplicator for the rank-versus-count example.
//
// The game is played on 𝒜 = {A} and 𝔅 = {B_p : p in A}, where A is the
// disjoint union of the apex extensions D_j of all (k-1)-node digraphs and
// B_p deletes p from A.  Points of every B_p are named by their original
// element of A, so a labeled A and a labeled B_p are in harmony when they
// carry the same pin sequence (which then avoids p).
//
// Duplicator's script: when Spoiler picks a in a labeled A, every labeled
// B_p in harmony with it answers a (if a != p); when Spoiler picks b in a
// labeled B_p, every labeled A in harmony with it is copied and answers b.
// Everything else gets an arbitrary answer (the least legal element).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qgames/formula.hpp"
#include "qgames/structure.hpp"

namespace qgames {

/// A = disjoint union of apex_extension(C) over the (k-1)-node digraphs C.
Structure rank_count_structure(std::size_t k);

/// ∀x1 ∃x2 … ∃xk: "x1 lies in an induced copy of some D_j".  It has k
/// quantifiers and holds in A.  It fails in every B_p at any x1 left in the
/// component of p: that component now has fewer than k points, and every
/// D_j is connected.
Formula rank_count_short_separator(std::size_t k);

struct HarmonyCopy {
  /// The deleted point for a copy of B_p; nullopt for a copy of A.
  std::optional<Element> deleted;
  /// Pins in original A-element names.
  std::vector<Element> pins;
  bool operator==(const HarmonyCopy&) const = default;
};

class HarmonyGame {
 public:
  explicit HarmonyGame(Structure a);

  const Structure& a() const { return a_; }
  std::size_t rounds() const { return rounds_; }
  const std::vector<HarmonyCopy>& a_copies() const { return a_side_; }
  const std::vector<HarmonyCopy>& b_copies() const { return b_side_; }
  /// B_p as a structure, with A-element e renamed to e - (e > p).
  Structure b_structure(Element p) const { return delete_element(a_, p); }

  /// Spoiler picks choices[i] in the i-th copy of A.
  void spoiler_moves_a(const std::vector<Element>& choices);
  /// Spoiler picks choices[i] (an A-element other than the deleted point)
  /// in the i-th copy of some B_p.
  void spoiler_moves_b(const std::vector<Element>& choices);

  /// Every labeled A and every point p it has not pinned has a labeled
  /// B_p in harmony with it.  On failure `violation` names a witness.
  bool property_star(std::string* violation = nullptr) const;
  /// Some labeled A and labeled B_p are partially isomorphic (checked on
  /// the actual structures, not via harmony).
  bool has_matching_pair() const;

 private:
  static bool in_harmony(const HarmonyCopy& a, const HarmonyCopy& b) { return a.pins == b.pins; }
  Element arbitrary(std::optional<Element> deleted) const;

  Structure a_;
  std::size_t rounds_ = 0;
  std::vector<HarmonyCopy> a_side_;
  std::vector<HarmonyCopy> b_side_;
};

}  // namespace qgames
