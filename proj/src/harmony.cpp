#include "qgames/harmony.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"

namespace qgames {

Structure rank_count_structure(std::size_t k) {
  if (k < 2) throw InvalidArgument("rank-count structure needs k >= 2");
  std::vector<Structure> parts;
  for (const Structure& c : enumerate_structures_up_to_iso(Vocabulary::graph(), k - 1))
    parts.push_back(apex_extension(c));
  return disjoint_union(parts);
}

Formula rank_count_short_separator(std::size_t k) {
  if (k < 2) throw InvalidArgument("rank-count separator needs k >= 2");
  auto x = [](std::size_t i) { return Term::var("x" + std::to_string(i + 1)); };
  std::vector<Formula> cases;
  for (const Structure& c : enumerate_structures_up_to_iso(Vocabulary::graph(), k - 1)) {
    const Structure d = apex_extension(c);
    // x1 plays node `role` of D_j; the other nodes take x2.. in order.
    for (std::size_t role = 0; role < k; ++role) {
      std::vector<std::size_t> var(k);
      for (std::size_t v = 0, next = 1; v < k; ++v) var[v] = v == role ? 0 : next++;
      std::vector<Formula> atoms;
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) atoms.push_back(neq(x(a), x(b)));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
          Formula e = rel("E", {x(var[a]), x(var[b])});
          atoms.push_back(d.holds(0, static_cast<Element>(a), static_cast<Element>(b)) ? e
                                                                                       : lnot(e));
        }
      cases.push_back(land(std::move(atoms)));
    }
  }
  Formula f = lor(std::move(cases));
  for (std::size_t i = k; i >= 2; --i) f = exists("x" + std::to_string(i), f);
  return forall("x1", f);
}

HarmonyGame::HarmonyGame(Structure a) : a_(std::move(a)) {
  if (a_.size() < 2) throw InvalidArgument("harmony game needs at least two points");
  a_side_.push_back({std::nullopt, {}});
  for (Element p = 0; p < a_.size(); ++p) b_side_.push_back({p, {}});
}

Element HarmonyGame::arbitrary(std::optional<Element> deleted) const {
  return deleted && *deleted == 0 ? 1 : 0;
}

void HarmonyGame::spoiler_moves_a(const std::vector<Element>& choices) {
  if (choices.size() != a_side_.size()) throw InvalidArgument("one choice per copy of A");
  for (std::size_t i = 0; i < choices.size(); ++i)
    if (choices[i] >= a_.size()) throw InvalidArgument("choice out of range");
  std::vector<HarmonyCopy> next_b;
  for (const HarmonyCopy& b : b_side_) {
    // Copies of A with equal pins are equal, so at most one is in harmony.
    std::optional<Element> answer;
    for (std::size_t i = 0; i < a_side_.size() && !answer; ++i)
      if (in_harmony(a_side_[i], b) && choices[i] != *b.deleted) answer = choices[i];
    HarmonyCopy moved = b;
    moved.pins.push_back(answer ? *answer : arbitrary(b.deleted));
    next_b.push_back(std::move(moved));
  }
  for (std::size_t i = 0; i < a_side_.size(); ++i) a_side_[i].pins.push_back(choices[i]);
  b_side_ = std::move(next_b);
  ++rounds_;
}

void HarmonyGame::spoiler_moves_b(const std::vector<Element>& choices) {
  if (choices.size() != b_side_.size()) throw InvalidArgument("one choice per copy of B_p");
  for (std::size_t i = 0; i < choices.size(); ++i)
    if (choices[i] >= a_.size() || choices[i] == *b_side_[i].deleted)
      throw InvalidArgument("choice is not a point of B_p");
  std::vector<HarmonyCopy> next_a;
  for (const HarmonyCopy& a : a_side_) {
    std::set<Element> answers;
    for (std::size_t i = 0; i < b_side_.size(); ++i)
      if (in_harmony(a, b_side_[i])) answers.insert(choices[i]);
    if (answers.empty()) answers.insert(arbitrary(std::nullopt));
    for (Element v : answers) {
      HarmonyCopy copy = a;
      copy.pins.push_back(v);
      if (std::find(next_a.begin(), next_a.end(), copy) == next_a.end())
        next_a.push_back(std::move(copy));
    }
  }
  for (std::size_t i = 0; i < b_side_.size(); ++i) b_side_[i].pins.push_back(choices[i]);
  a_side_ = std::move(next_a);
  ++rounds_;
}

bool HarmonyGame::property_star(std::string* violation) const {
  for (const HarmonyCopy& a : a_side_) {
    for (Element p = 0; p < a_.size(); ++p) {
      if (std::find(a.pins.begin(), a.pins.end(), p) != a.pins.end()) continue;
      const bool found = std::any_of(b_side_.begin(), b_side_.end(), [&](const HarmonyCopy& b) {
        return *b.deleted == p && in_harmony(a, b);
      });
      if (!found) {
        if (violation) {
          *violation = "after round " + std::to_string(rounds_) + ", the labeled A with pins [";
          for (std::size_t i = 0; i < a.pins.size(); ++i)
            *violation += (i ? " " : "") + std::to_string(a.pins[i]);
          *violation += "] has no labeled B_" + std::to_string(p) + " in harmony";
        }
        return false;
      }
    }
  }
  return true;
}

bool HarmonyGame::has_matching_pair() const {
  const auto a_ptr = std::make_shared<const Structure>(a_);
  for (const HarmonyCopy& b : b_side_) {
    const Element p = *b.deleted;
    if (std::find(b.pins.begin(), b.pins.end(), p) != b.pins.end()) continue;
    const auto b_ptr = std::make_shared<const Structure>(b_structure(p));
    std::vector<Element> renamed;
    for (Element e : b.pins) renamed.push_back(e > p ? e - 1 : e);
    const LabeledStructure lb(b_ptr, renamed);
    for (const HarmonyCopy& a : a_side_)
      if (partial_isomorphism(LabeledStructure(a_ptr, a.pins), lb)) return true;
  }
  return false;
}

}  // namespace qgames
