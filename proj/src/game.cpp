#include "qgames/game.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "qgames/errors.hpp"

namespace qgames {

std::string to_string(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }
std::string to_string(Side s) { return s == Side::A ? "a" : "b"; }

namespace {

using Set = MsSearch::Set;

bool intersects(const Set& a, const Set& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

Set insert_sorted(const Set& s, std::uint32_t v) {
  Set out = s;
  auto it = std::lower_bound(out.begin(), out.end(), v);
  if (it == out.end() || *it != v) out.insert(it, v);
  return out;
}

void validate_sets(const std::vector<LabeledStructure>& a, const std::vector<LabeledStructure>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("both sides must be non-empty");
  const Vocabulary& v = a.front().structure().vocabulary();
  const std::size_t pins = a.front().pins.size();
  for (const auto* side : {&a, &b})
    for (const auto& x : *side) {
      if (!(x.structure().vocabulary() == v)) throw InvalidArgument("vocabulary mismatch");
      if (x.pins.size() != pins) throw InvalidArgument("pin-count mismatch");
    }
}

std::vector<LabeledStructure> wrap(const std::vector<Structure>& s) {
  std::vector<LabeledStructure> out;
  for (const auto& x : s) out.emplace_back(x);
  return out;
}

}  // namespace

// ------------------------------------------------------------- MsSearch

MsSearch::MsSearch(ClassSpace& space, const MsOptions& opts) : space_(space), opts_(opts) {}

void MsSearch::check_size(const Set& s) {
  stats_.max_side = std::max(stats_.max_side, s.size());
  if (s.size() > opts_.max_classes)
    throw ResourceLimit("classes-per-side", "a side grew to " + std::to_string(s.size()) +
                                                " classes, above the cap of " +
                                                std::to_string(opts_.max_classes));
}

MsSearch::Set MsSearch::expand(const Set& side) {
  Set out;
  for (auto id : side) {
    const auto& kids = space_.children(id);
    out.insert(out.end(), kids.begin(), kids.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  check_size(out);
  return out;
}

bool MsSearch::no_partial_iso(const Set& a, const Set& b) {
  std::vector<AtomicId> aa, bb;
  for (auto id : a) aa.push_back(space_.atomic(id));
  for (auto id : b) bb.push_back(space_.atomic(id));
  std::sort(aa.begin(), aa.end());
  std::sort(bb.begin(), bb.end());
  aa.erase(std::unique(aa.begin(), aa.end()), aa.end());
  bb.erase(std::unique(bb.begin(), bb.end()), bb.end());
  return !intersects(aa, bb);
}

namespace {

std::vector<std::uint32_t> state_key(const Set& a, const Set& b, std::size_t rounds,
                                     FirstMove c) {
  std::vector<std::uint32_t> key;
  key.reserve(a.size() + b.size() + 3);
  key.push_back(static_cast<std::uint32_t>(rounds));
  key.push_back(static_cast<std::uint32_t>(c));
  key.push_back(static_cast<std::uint32_t>(a.size()));
  key.insert(key.end(), a.begin(), a.end());
  key.insert(key.end(), b.begin(), b.end());
  return key;
}

}  // namespace

bool MsSearch::spoiler_wins(const Set& a, const Set& b, std::size_t rounds,
                            FirstMove constraint) {
  check_size(a);
  check_size(b);
  if (intersects(a, b)) return false;
  if (no_partial_iso(a, b)) return true;
  if (rounds == 0) return false;
  auto key = state_key(a, b, rounds, constraint);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second.spoiler;
  std::optional<Move> move;
  bool win = false;
  if (constraint != FirstMove::B) win = try_side(a, b, rounds, Side::A, move);
  if (!win && constraint != FirstMove::A) win = try_side(b, a, rounds, Side::B, move);
  if (memo_.size() >= opts_.max_memo)
    throw ResourceLimit("memo-entries", "the solver memo exceeded " +
                                            std::to_string(opts_.max_memo) + " entries");
  memo_.emplace(std::move(key), Entry{win, std::move(move)});
  ++stats_.states;
  return win;
}

std::optional<MsSearch::Move> MsSearch::winning_move(const Set& a, const Set& b,
                                                     std::size_t rounds, FirstMove constraint) {
  auto it = memo_.find(state_key(a, b, rounds, constraint));
  if (it == memo_.end() || !it->second.spoiler) return std::nullopt;
  return it->second.move;
}

bool MsSearch::try_side(const Set& mover, const Set& other, std::size_t rounds, Side side,
                        std::optional<Move>& out) {
  const Set other_exp = expand(other);
  // Sub-game outcome with the moving side reduced to `chosen`.
  auto wins = [&](const Set& chosen) {
    return side == Side::A ? spoiler_wins(chosen, other_exp, rounds - 1)
                           : spoiler_wins(other_exp, chosen, rounds - 1);
  };
  // Candidates per class: children outside the expansion that win on
  // their own (Spoiler's win is monotone under shrinking either side).
  std::vector<std::vector<std::uint32_t>> cand(mover.size());
  for (std::size_t i = 0; i < mover.size(); ++i) {
    const std::vector<std::uint32_t> kids = space_.children(mover[i]);
    for (auto c : kids) {
      if (std::binary_search(other_exp.begin(), other_exp.end(), c)) continue;
      if (wins(Set{c})) cand[i].push_back(c);
    }
    if (cand[i].empty()) return false;
  }
  std::vector<std::size_t> order(mover.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return cand[x].size() < cand[y].size(); });
  std::vector<std::uint32_t> choice(mover.size());
  std::function<bool(std::size_t, const Set&)> rec = [&](std::size_t idx, const Set& chosen) {
    if (idx == order.size()) return true;
    const std::size_t cls = order[idx];
    // Reusing an already chosen class leaves the chosen set unchanged,
    // which dominates every other option.
    for (auto c : cand[cls])
      if (std::binary_search(chosen.begin(), chosen.end(), c)) {
        choice[cls] = c;
        return rec(idx + 1, chosen);
      }
    for (auto c : cand[cls]) {
      Set next = insert_sorted(chosen, c);
      if (next.size() > 1 && !wins(next)) continue;
      choice[cls] = c;
      if (rec(idx + 1, next)) return true;
    }
    return false;
  };
  if (!rec(0, Set{})) return false;
  out = Move{side, choice};
  return true;
}

// --------------------------------------------------------- ExplicitSpace

std::uint32_t ExplicitSpace::class_of(const LabeledStructure& a) {
  auto key = labeled_canonical_form(a, canon_);
  auto [it, inserted] = ids_.try_emplace(std::move(key), static_cast<std::uint32_t>(reps_.size()));
  if (inserted) {
    reps_.push_back(a);
    atomic_.push_back(table_.atomic_of(a));
    children_.emplace_back();
  }
  return it->second;
}

const std::vector<std::uint32_t>& ExplicitSpace::children(std::uint32_t id) {
  if (!children_[id]) {
    std::vector<std::uint32_t> kids;
    const LabeledStructure rep = reps_[id];
    for (Element e = 0; e < rep.structure().size(); ++e) kids.push_back(class_of(rep.extended(e)));
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    children_[id] = std::move(kids);
  }
  return *children_[id];
}

// --------------------------------------------------------------- solve_ms

namespace {

// Everything needed to run the search on concrete inputs and map results
// back to elements.
struct MsInstance {
  TypeTable table;
  std::unique_ptr<TypeSpace> types;
  std::unique_ptr<ExplicitSpace> explicit_space;
  ClassSpace* space = nullptr;
  bool merge;
  std::size_t rounds;
  std::vector<LabeledStructure> in_a, in_b;
  std::vector<std::uint32_t> id_a, id_b;
  Set set_a, set_b;

  MsInstance(const std::vector<LabeledStructure>& a, const std::vector<LabeledStructure>& b,
             std::size_t r, const MsOptions& opts)
      : table(a.front().structure().vocabulary(), opts.linear_order_fast_path),
        merge(opts.merge_equivalent),
        rounds(r),
        in_a(a),
        in_b(b) {
    if (merge) {
      types = std::make_unique<TypeSpace>(table);
      space = types.get();
    } else {
      explicit_space = std::make_unique<ExplicitSpace>(table, opts.canon);
      space = explicit_space.get();
    }
    for (const auto& x : in_a) id_a.push_back(class_id(x, r));
    for (const auto& x : in_b) id_b.push_back(class_id(x, r));
    set_a = id_a;
    set_b = id_b;
    for (Set* s : {&set_a, &set_b}) {
      std::sort(s->begin(), s->end());
      s->erase(std::unique(s->begin(), s->end()), s->end());
    }
  }

  std::uint32_t class_id(const LabeledStructure& x, std::size_t k) {
    return merge ? table.type_of(x, k) : explicit_space->class_of(x);
  }

  SpoilerMove translate(const MsSearch::Move& m) {
    const bool on_a = m.side == Side::A;
    const auto& inputs = on_a ? in_a : in_b;
    const auto& ids = on_a ? id_a : id_b;
    const Set& sorted = on_a ? set_a : set_b;
    SpoilerMove out{m.side, {}};
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const auto pos = std::lower_bound(sorted.begin(), sorted.end(), ids[i]) - sorted.begin();
      const std::uint32_t want = m.choice[pos];
      bool found = false;
      for (Element e = 0; e < inputs[i].structure().size() && !found; ++e)
        if (class_id(inputs[i].extended(e), rounds - 1) == want) {
          out.choices.push_back(e);
          found = true;
        }
      if (!found) throw std::logic_error("witness class has no element");
    }
    return out;
  }
};

}  // namespace

GameOutcome solve_ms(const std::vector<LabeledStructure>& set_a,
                     const std::vector<LabeledStructure>& set_b, std::size_t r,
                     const MsOptions& opts) {
  validate_sets(set_a, set_b);
  MsInstance inst(set_a, set_b, r, opts);
  MsSearch search(*inst.space, opts);
  GameOutcome out;
  const bool win = search.spoiler_wins(inst.set_a, inst.set_b, r, opts.first_move);
  out.winner = win ? Player::Spoiler : Player::Duplicator;
  if (win && r > 0) {
    auto mv = search.winning_move(inst.set_a, inst.set_b, r, opts.first_move);
    if (mv) out.witness = inst.translate(*mv);
  }
  out.stats = search.stats();
  out.stats.types = inst.space->size();
  return out;
}

GameOutcome solve_ms(const std::vector<Structure>& set_a, const std::vector<Structure>& set_b,
                     std::size_t r, const MsOptions& opts) {
  return solve_ms(wrap(set_a), wrap(set_b), r, opts);
}

// ------------------------------------------------------------- extraction

namespace {

Formula make_conj(std::vector<Formula> parts) {
  return parts.size() == 1 ? parts.front() : land(std::move(parts));
}
Formula make_disj(std::vector<Formula> parts) {
  return parts.size() == 1 ? parts.front() : lor(std::move(parts));
}

// Quantifier-free formula over x1..x{pins} true on every atomic type of
// `a` and false on every atomic type of `b` (the sets are disjoint).
Formula separate_atomic(const TypeTable& table, const std::vector<AtomicId>& a,
                        const std::vector<AtomicId>& b, std::size_t pins) {
  std::vector<Formula> disjuncts;
  for (AtomicId alpha : a) {
    auto lits = table.literals(alpha);
    std::vector<AtomicId> remaining = b;
    std::vector<Formula> conj;
    while (!remaining.empty()) {
      std::size_t best = lits.size();
      std::size_t best_score = 0;
      int best_pref = -1;
      for (std::size_t i = 0; i < lits.size(); ++i) {
        std::size_t score = 0;
        for (AtomicId beta : remaining) score += !table.literal_holds(lits[i], beta);
        // Prefer positive relation atoms, then positive equalities.
        const int pref = lits[i].positive ? (lits[i].is_equality ? 1 : 2) : 0;
        if (score > best_score || (score == best_score && score > 0 && pref > best_pref)) {
          best = i;
          best_score = score;
          best_pref = pref;
        }
      }
      if (best == lits.size()) throw std::logic_error("atomic types are not separable");
      conj.push_back(table.literal_formula(lits[best], pins));
      std::vector<AtomicId> keep;
      for (AtomicId beta : remaining)
        if (table.literal_holds(lits[best], beta)) keep.push_back(beta);
      remaining = std::move(keep);
    }
    disjuncts.push_back(make_conj(std::move(conj)));
  }
  return make_disj(std::move(disjuncts));
}

std::vector<AtomicId> atomics_of(ClassSpace& space, const Set& s) {
  std::vector<AtomicId> out;
  for (auto id : s) out.push_back(space.atomic(id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Formula build_separator(MsSearch& search, ClassSpace& space, const TypeTable& table,
                        const Set& a, const Set& b, std::size_t rounds, FirstMove constraint,
                        std::size_t pins) {
  auto aa = atomics_of(space, a);
  auto bb = atomics_of(space, b);
  std::vector<AtomicId> common;
  std::set_intersection(aa.begin(), aa.end(), bb.begin(), bb.end(), std::back_inserter(common));
  if (common.empty()) return separate_atomic(table, aa, bb, pins);
  auto mv = search.winning_move(a, b, rounds, constraint);
  if (!mv) throw std::logic_error("separator requested for a Duplicator state");
  const std::string x = "x" + std::to_string(pins + 1);
  if (mv->side == Side::A) {
    Set chosen(mv->choice.begin(), mv->choice.end());
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    Set b_exp = search.expand(b);
    return exists(x, build_separator(search, space, table, chosen, b_exp, rounds - 1,
                                     FirstMove::Any, pins + 1));
  }
  Set chosen(mv->choice.begin(), mv->choice.end());
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  Set a_exp = search.expand(a);
  return forall(x, build_separator(search, space, table, a_exp, chosen, rounds - 1,
                                   FirstMove::Any, pins + 1));
}

}  // namespace

Formula extract_separating_sentence(const std::vector<LabeledStructure>& set_a,
                                    const std::vector<LabeledStructure>& set_b, std::size_t r,
                                    const MsOptions& opts) {
  validate_sets(set_a, set_b);
  MsInstance inst(set_a, set_b, r, opts);
  MsSearch search(*inst.space, opts);
  if (!search.spoiler_wins(inst.set_a, inst.set_b, r, opts.first_move))
    throw NoSeparator("Duplicator wins the " + std::to_string(r) +
                      "-round multi-structural game; no separating sentence exists");
  return build_separator(search, *inst.space, inst.table, inst.set_a, inst.set_b, r,
                         opts.first_move, set_a.front().pins.size());
}

Formula extract_separating_sentence(const std::vector<Structure>& set_a,
                                    const std::vector<Structure>& set_b, std::size_t r,
                                    const MsOptions& opts) {
  return extract_separating_sentence(wrap(set_a), wrap(set_b), r, opts);
}

// ------------------------------------------------- brute-force separators

std::optional<Formula> find_prenex_separator(const std::vector<Structure>& set_a,
                                             const std::vector<Structure>& set_b, std::size_t r,
                                             std::size_t max_atomic_types) {
  if (set_a.empty() || set_b.empty()) throw InvalidArgument("both sides must be non-empty");
  TypeTable table(set_a.front().vocabulary(), false);
  std::vector<const Structure*> all;
  for (const auto& s : set_a) all.push_back(&s);
  for (const auto& s : set_b) all.push_back(&s);
  for (std::size_t q = 0; q <= r; ++q) {
    // Atomic type index of every q-tuple of every structure.
    std::vector<AtomicId> realized;
    std::vector<std::vector<std::size_t>> type_at(all.size());
    for (std::size_t si = 0; si < all.size(); ++si) {
      const Structure& s = *all[si];
      const std::size_t n = s.size();
      std::size_t count = 1;
      for (std::size_t i = 0; i < q; ++i) count *= n;
      auto base = std::make_shared<const Structure>(s);
      for (std::size_t code = 0; code < count; ++code) {
        std::vector<Element> pins(q);
        std::size_t c = code;
        for (std::size_t i = q; i-- > 0;) {
          pins[i] = static_cast<Element>(c % n);
          c /= n;
        }
        AtomicId id = table.atomic_of(LabeledStructure(base, pins));
        auto it = std::find(realized.begin(), realized.end(), id);
        if (it == realized.end()) {
          realized.push_back(id);
          it = realized.end() - 1;
        }
        type_at[si].push_back(static_cast<std::size_t>(it - realized.begin()));
      }
    }
    const std::size_t t = realized.size();
    if (t > max_atomic_types)
      throw ResourceLimit("atomic-types", std::to_string(t) + " realized atomic types exceed " +
                                              std::to_string(max_atomic_types));
    for (std::size_t prefix = 0; prefix < (std::size_t{1} << q); ++prefix) {
      // bit i of prefix set: quantifier i is universal.
      for (std::uint64_t matrix = 1; matrix + 1 < (std::uint64_t{1} << t); ++matrix) {
        auto eval = [&](std::size_t si) {
          const std::size_t n = all[si]->size();
          std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t depth,
                                                                 std::size_t code) -> bool {
            if (depth == q) return (matrix >> type_at[si][code]) & 1U;
            const bool universal = (prefix >> depth) & 1U;
            for (std::size_t e = 0; e < n; ++e) {
              bool v = go(depth + 1, code * n + e);
              if (universal && !v) return false;
              if (!universal && v) return true;
            }
            return universal;
          };
          return go(0, 0);
        };
        bool ok = true;
        for (std::size_t si = 0; si < all.size() && ok; ++si)
          ok = eval(si) == (si < set_a.size());
        if (!ok) continue;
        std::vector<Formula> disj;
        for (std::size_t i = 0; i < t; ++i) {
          if (!((matrix >> i) & 1U)) continue;
          std::vector<Formula> conj;
          for (const auto& lit : table.literals(realized[i]))
            conj.push_back(table.literal_formula(lit, q));
          if (conj.empty()) conj.push_back(eq(Term::var("x1"), Term::var("x1")));
          disj.push_back(make_conj(std::move(conj)));
        }
        Formula f = make_disj(std::move(disj));
        for (std::size_t i = q; i-- > 0;) {
          const std::string x = "x" + std::to_string(i + 1);
          f = (prefix >> i) & 1U ? forall(x, f) : exists(x, f);
        }
        return f;
      }
    }
  }
  return std::nullopt;
}

}  // namespace qgames
