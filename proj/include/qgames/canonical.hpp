#pragma once

// Brute-force canonical labeling of small labeled structures and
// enumeration of structures up to isomorphism.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "qgames/structure.hpp"

namespace qgames {

/// Canonical key: equal keys <=> isomorphic respecting pins and constants.
using CanonicalKey = std::vector<std::uint32_t>;

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept;
};

struct CanonOptions {
  /// Largest universe that is canonicalized (ResourceLimit above it).
  std::size_t max_elements = 12;
  /// Largest number of leaves visited by the individualization search.
  std::size_t max_leaves = 2'000'000;
};

/// Color refinement followed by individualization over the remaining
/// non-singleton cells; every leaf permutation is encoded and the
/// lexicographically smallest encoding is the key.  Interchangeable
/// ("twin") elements of a cell are branched on only once.
CanonicalKey labeled_canonical_form(const LabeledStructure& a,
                                    const CanonOptions& opts = {});

/// Exhaustive pin- and constant-respecting isomorphism test (reference
/// implementation used to validate the canonical form).
bool brute_force_isomorphic(const LabeledStructure& a, const LabeledStructure& b);

struct EnumerateOptions {
  /// Largest number of labeled structures that may be generated.  For a
  /// single binary relation this admits k <= 4 (2^16 labeled structures).
  std::size_t max_labeled = std::size_t{1} << 20;
};

/// One representative per isomorphism class over a constant-free
/// vocabulary, in ascending canonical-key order.
std::vector<Structure> enumerate_structures_up_to_iso(const Vocabulary& vocab, std::size_t k,
                                                      const EnumerateOptions& opts = {});

/// Calls `visit` with every labeled structure over `vocab` on k elements
/// (constants excluded).  Used by exhaustive checks.
void for_each_labeled_structure(const Vocabulary& vocab, std::size_t k,
                                const std::function<void(const Structure&)>& visit,
                                const EnumerateOptions& opts = {});

/// All rooted trees with exactly n nodes up to isomorphism.
std::vector<TreeSpec> enumerate_rooted_trees(std::size_t n);

}  // namespace qgames
