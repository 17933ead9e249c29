#include "qgames/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "qgames/errors.hpp"

namespace qgames {

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& k) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : k) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

// Pins followed by constants: the elements that an isomorphism must fix
// positionally.
std::vector<Element> fixed_sequence(const LabeledStructure& a) {
  std::vector<Element> seq = a.pins;
  const auto& c = a.structure().constants();
  seq.insert(seq.end(), c.begin(), c.end());
  return seq;
}

class Canonizer {
 public:
  Canonizer(const LabeledStructure& a, const CanonOptions& opts)
      : s_(a.structure()), fixed_(fixed_sequence(a)), opts_(opts) {
    n_ = s_.size();
    incident_.resize(n_);
    const auto& rels = s_.vocabulary().relations();
    for (std::size_t r = 0; r < rels.size(); ++r)
      for (const auto& t : s_.tuples(r)) {
        std::set<Element> seen(t.begin(), t.end());
        for (Element e : seen) incident_[e].push_back({r, &t});
      }
  }

  CanonicalKey run() {
    // Initial colors: position of first occurrence in the fixed sequence,
    // unfixed elements after all fixed ones.
    std::vector<std::uint32_t> color(n_, static_cast<std::uint32_t>(fixed_.size()));
    for (std::size_t i = fixed_.size(); i-- > 0;) color[fixed_[i]] = static_cast<std::uint32_t>(i);
    refine(color);
    search(color);
    return best_;
  }

 private:
  // Iterated refinement; colors are renumbered 0..c-1 by the sorted
  // (old color, signature) pairs, which is isomorphism invariant.
  void refine(std::vector<std::uint32_t>& color) const {
    std::size_t classes = count_classes(color);
    while (true) {
      std::vector<std::pair<std::uint32_t, std::vector<std::uint32_t>>> sig(n_);
      for (Element e = 0; e < n_; ++e) {
        std::vector<std::vector<std::uint32_t>> parts;
        for (const auto& [rel, tuple] : incident_[e]) {
          std::vector<std::uint32_t> p{static_cast<std::uint32_t>(rel)};
          for (Element x : *tuple)
            p.push_back(x == e ? 0xFFFFFFFFU : color[x]);
          parts.push_back(std::move(p));
        }
        std::sort(parts.begin(), parts.end());
        std::vector<std::uint32_t> flat;
        for (auto& p : parts) {
          flat.push_back(static_cast<std::uint32_t>(p.size()));
          flat.insert(flat.end(), p.begin(), p.end());
        }
        sig[e] = {color[e], std::move(flat)};
      }
      std::vector<Element> order(n_);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](Element x, Element y) { return sig[x] < sig[y]; });
      std::vector<std::uint32_t> next(n_);
      std::uint32_t c = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++c;
        next[order[i]] = c;
      }
      color = std::move(next);
      std::size_t now = count_classes(color);
      if (now == classes) return;
      classes = now;
    }
  }

  static std::size_t count_classes(const std::vector<std::uint32_t>& color) {
    std::set<std::uint32_t> s(color.begin(), color.end());
    return s.size();
  }

  // u and v are interchangeable: the transposition (u v) preserves every
  // relation.  Both lie outside the fixed sequence when this is asked.
  bool twins(Element u, Element v) const {
    const auto& rels = s_.vocabulary().relations();
    for (Element e : {u, v})
      for (const auto& [rel, tuple] : incident_[e]) {
        Tuple t = *tuple;
        for (auto& x : t) x = x == u ? v : (x == v ? u : x);
        if (!s_.holds(rel, t)) return false;
      }
    (void)rels;
    return true;
  }

  void search(const std::vector<std::uint32_t>& color) {
    // Find the first non-singleton cell (smallest color).
    std::map<std::uint32_t, std::vector<Element>> cells;
    for (Element e = 0; e < n_; ++e) cells[color[e]].push_back(e);
    const std::vector<Element>* target = nullptr;
    std::uint32_t target_color = 0;
    for (const auto& [c, members] : cells)
      if (members.size() > 1) {
        target = &members;
        target_color = c;
        break;
      }
    if (!target) {
      leaf(color);
      return;
    }
    std::vector<Element> tried;
    for (Element v : *target) {
      bool redundant = false;
      for (Element u : tried)
        if (twins(u, v)) {
          redundant = true;
          break;
        }
      if (redundant) continue;
      tried.push_back(v);
      std::vector<std::uint32_t> next(n_);
      for (Element e = 0; e < n_; ++e)
        next[e] = color[e] == target_color && e != v ? 2 * color[e] + 1 : 2 * color[e];
      refine(next);
      search(next);
    }
  }

  void leaf(const std::vector<std::uint32_t>& perm) {
    if (++leaves_ > opts_.max_leaves)
      throw ResourceLimit("canonical-leaves",
                          "canonical labeling exceeded " + std::to_string(opts_.max_leaves) +
                              " search leaves");
    CanonicalKey key{static_cast<std::uint32_t>(n_)};
    const auto& rels = s_.vocabulary().relations();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      std::vector<Tuple> mapped;
      mapped.reserve(s_.tuples(r).size());
      for (const auto& t : s_.tuples(r)) {
        Tuple m;
        for (Element x : t) m.push_back(perm[x]);
        mapped.push_back(std::move(m));
      }
      std::sort(mapped.begin(), mapped.end());
      key.push_back(static_cast<std::uint32_t>(mapped.size()));
      for (const auto& t : mapped) key.insert(key.end(), t.begin(), t.end());
    }
    key.push_back(static_cast<std::uint32_t>(fixed_.size()));
    for (Element x : fixed_) key.push_back(perm[x]);
    if (best_.empty() || key < best_) best_ = std::move(key);
  }

  const Structure& s_;
  std::vector<Element> fixed_;
  CanonOptions opts_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::pair<std::size_t, const Tuple*>>> incident_;
  CanonicalKey best_;
  std::size_t leaves_ = 0;
};

}  // namespace

CanonicalKey labeled_canonical_form(const LabeledStructure& a, const CanonOptions& opts) {
  if (a.structure().size() > opts.max_elements)
    throw ResourceLimit("canonical-size",
                        "structure with " + std::to_string(a.structure().size()) +
                            " elements exceeds the canonicalization bound of " +
                            std::to_string(opts.max_elements));
  return Canonizer(a, opts).run();
}

bool brute_force_isomorphic(const LabeledStructure& a, const LabeledStructure& b) {
  const Structure& sa = a.structure();
  const Structure& sb = b.structure();
  if (!(sa.vocabulary() == sb.vocabulary()) || sa.size() != sb.size() ||
      a.pins.size() != b.pins.size())
    return false;
  const std::size_t n = sa.size();
  for (std::size_t r = 0; r < sa.vocabulary().relations().size(); ++r)
    if (sa.tuples(r).size() != sb.tuples(r).size()) return false;
  std::vector<Element> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const auto fa = fixed_sequence(a);
  const auto fb = fixed_sequence(b);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < fa.size() && ok; ++i) ok = perm[fa[i]] == fb[i];
    for (std::size_t r = 0; r < sa.vocabulary().relations().size() && ok; ++r)
      for (const auto& t : sa.tuples(r)) {
        Tuple m;
        for (Element x : t) m.push_back(perm[x]);
        if (!sb.holds(r, m)) {
          ok = false;
          break;
        }
      }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

void for_each_labeled_structure(const Vocabulary& vocab, std::size_t k,
                                const std::function<void(const Structure&)>& visit,
                                const EnumerateOptions& opts) {
  if (!vocab.constants().empty())
    throw InvalidArgument("enumeration requires a constant-free vocabulary");
  // All candidate tuples, relation by relation.
  std::vector<std::pair<std::size_t, Tuple>> cells;
  for (std::size_t r = 0; r < vocab.relations().size(); ++r) {
    const std::size_t ar = vocab.relations()[r].arity;
    if (k == 0) break;
    Tuple t(ar, 0);
    while (true) {
      cells.push_back({r, t});
      std::size_t pos = ar;
      while (pos > 0 && ++t[pos - 1] == k) t[--pos] = 0;
      if (pos == 0) break;
    }
  }
  if (cells.size() >= 63 || (std::size_t{1} << cells.size()) > opts.max_labeled)
    throw ResourceLimit("enumeration-size",
                        "enumerating " + std::to_string(k) +
                            "-element structures needs 2^" + std::to_string(cells.size()) +
                            " labeled structures, above the configured bound of " +
                            std::to_string(opts.max_labeled));
  const std::size_t total = std::size_t{1} << cells.size();
  for (std::size_t mask = 0; mask < total; ++mask) {
    std::vector<std::vector<Tuple>> tables(vocab.relations().size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      if ((mask >> i) & 1U) tables[cells[i].first].push_back(cells[i].second);
    visit(Structure(vocab, k, std::move(tables)));
  }
}

std::vector<Structure> enumerate_structures_up_to_iso(const Vocabulary& vocab, std::size_t k,
                                                      const EnumerateOptions& opts) {
  std::map<CanonicalKey, Structure> reps;
  CanonOptions copts;
  copts.max_elements = std::max<std::size_t>(k, copts.max_elements);
  for_each_labeled_structure(
      vocab, k,
      [&](const Structure& s) {
        auto key = labeled_canonical_form(LabeledStructure(s), copts);
        reps.try_emplace(std::move(key), s);
      },
      opts);
  std::vector<Structure> out;
  out.reserve(reps.size());
  for (auto& [key, s] : reps) out.push_back(std::move(s));
  return out;
}

std::vector<TreeSpec> enumerate_rooted_trees(std::size_t n) {
  if (n == 0) return {};
  // by_size[m]: parent vectors of all rooted trees with m nodes (root 0).
  std::vector<std::vector<std::vector<std::size_t>>> by_size(n + 1);
  by_size[1] = {{TreeSpec::kRoot}};
  for (std::size_t m = 2; m <= n; ++m) {
    // Children forests of total size m-1, as nonincreasing sequences of
    // (size, index) so every multiset appears once.
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    std::function<void(std::size_t, std::pair<std::size_t, std::size_t>)> rec =
        [&](std::size_t remaining, std::pair<std::size_t, std::size_t> bound) {
          if (remaining == 0) {
            std::vector<std::size_t> parent{TreeSpec::kRoot};
            for (auto [sz, idx] : chosen) {
              const auto& sub = by_size[sz][idx];
              const std::size_t offset = parent.size();
              for (std::size_t i = 0; i < sub.size(); ++i)
                parent.push_back(sub[i] == TreeSpec::kRoot ? 0 : sub[i] + offset);
            }
            by_size[m].push_back(std::move(parent));
            return;
          }
          for (std::size_t sz = std::min(remaining, bound.first); sz >= 1; --sz) {
            const std::size_t top = sz == bound.first ? bound.second : by_size[sz].size() - 1;
            for (std::size_t idx = 0; idx <= top && idx < by_size[sz].size(); ++idx) {
              chosen.push_back({sz, idx});
              rec(remaining - sz, {sz, idx});
              chosen.pop_back();
            }
          }
        };
    rec(m - 1, {m - 1, std::numeric_limits<std::size_t>::max()});
  }
  std::vector<TreeSpec> out;
  for (auto& p : by_size[n]) out.emplace_back(std::move(p));
  return out;
}

}  // namespace qgames
