#include "qgames/types.hpp"

#include <algorithm>

#include "qgames/errors.hpp"

namespace qgames {

namespace {

std::size_t cap_for(std::size_t r) {
  return r >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << r) - 1;
}

}  // namespace

LabeledStructure gap_cap_linear_order(const LabeledStructure& a, std::size_t r) {
  std::vector<std::size_t> rank;
  if (!is_linear_order(a.structure(), &rank))
    throw InvalidArgument("gap capping needs a linear order");
  const std::size_t n = a.structure().size();
  const std::size_t cap = cap_for(r);
  std::vector<std::size_t> positions;
  for (Element p : a.pins) positions.push_back(rank[p]);
  std::vector<std::size_t> distinct = positions;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  // New position of every distinct pin after capping the gaps before it.
  std::vector<std::size_t> moved(distinct.size());
  std::size_t prev_end = 0;  // first original position after the previous pin
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    cursor += std::min(distinct[i] - prev_end, cap);
    moved[i] = cursor++;
    prev_end = distinct[i] + 1;
  }
  cursor += std::min(n - prev_end, cap);
  // With no pins and r = 0 everything is capped away; keep one element.
  cursor = std::max<std::size_t>(cursor, 1);
  std::vector<Element> pins;
  for (std::size_t p : positions) {
    auto it = std::lower_bound(distinct.begin(), distinct.end(), p);
    pins.push_back(static_cast<Element>(moved[it - distinct.begin()]));
  }
  return LabeledStructure(make_linear_order(cursor), std::move(pins));
}

TypeTable::TypeTable(Vocabulary vocab, bool linear_order_fast_path)
    : vocab_(std::move(vocab)), lo_fast_(linear_order_fast_path) {}

AtomicId TypeTable::atomic_of(const LabeledStructure& a) {
  const Structure& s = a.structure();
  if (!(s.vocabulary() == vocab_)) throw InvalidArgument("vocabulary mismatch");
  std::vector<Element> seq = a.pins;
  seq.insert(seq.end(), s.constants().begin(), s.constants().end());
  AtomicInfo info;
  info.pins = a.pins.size();
  info.terms = seq.size();
  const std::size_t m = seq.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) info.bits.push_back(seq[i] == seq[j]);
  const auto& rels = vocab_.relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const std::size_t ar = rels[r].arity;
    if (m == 0) break;
    std::vector<std::size_t> idx(ar, 0);
    std::vector<Element> args(ar);
    while (true) {
      for (std::size_t i = 0; i < ar; ++i) args[i] = seq[idx[i]];
      info.bits.push_back(s.holds(r, args));
      std::size_t pos = ar;
      while (pos > 0 && ++idx[pos - 1] == m) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }
  auto [it, inserted] = atomic_ids_.try_emplace(info, static_cast<AtomicId>(atomics_.size()));
  if (inserted) atomics_.push_back(std::move(info));
  return it->second;
}

TypeId TypeTable::intern(std::size_t level, AtomicId atomic, std::vector<TypeId> children) {
  auto key = std::make_tuple(level, atomic, children);
  auto it = type_ids_.find(key);
  if (it != type_ids_.end()) return it->second;
  const auto id = static_cast<TypeId>(types_.size());
  types_.push_back({level, atomic, std::move(children)});
  type_ids_.emplace(std::move(key), id);
  return id;
}

bool TypeTable::is_order(const StructurePtr& s) {
  auto it = order_cache_.find(s.get());
  if (it != order_cache_.end()) return it->second;
  bool lo = vocab_ == Vocabulary::order() && is_linear_order(*s);
  order_cache_[s.get()] = lo;
  alive_.emplace(s.get(), s);
  return lo;
}

StructurePtr TypeTable::order_of_size(std::size_t n) {
  auto it = orders_.find(n);
  if (it != orders_.end()) return it->second;
  auto s = std::make_shared<const Structure>(make_linear_order(n));
  orders_.emplace(n, s);
  return s;
}

TypeId TypeTable::order_type(const LabeledStructure& a, std::size_t k) {
  // Linear orders are rigid, and capped gap vectors determine the k-type.
  LabeledStructure capped = gap_cap_linear_order(a, k);
  std::vector<std::uint32_t> key{static_cast<std::uint32_t>(k),
                                 static_cast<std::uint32_t>(capped.structure().size())};
  for (Element p : capped.pins) key.push_back(p);
  auto it = order_memo_.find(key);
  if (it != order_memo_.end()) return it->second;
  const LabeledStructure shared(order_of_size(capped.structure().size()), capped.pins);
  const AtomicId at = atomic_of(shared);
  std::vector<TypeId> kids;
  if (k > 0) {
    for (Element e = 0; e < shared.structure().size(); ++e)
      kids.push_back(order_type(shared.extended(e), k - 1));
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  }
  TypeId id = intern(k, at, std::move(kids));
  order_memo_.emplace(std::move(key), id);
  return id;
}

TypeId TypeTable::type_of(const LabeledStructure& a, std::size_t k) {
  if (lo_fast_ && is_order(a.base)) return order_type(a, k);
  auto gkey = std::make_pair(a.base.get(), a.pins);
  gkey.second.push_back(static_cast<Element>(k));
  auto it = generic_memo_.find(gkey);
  if (it != generic_memo_.end()) return it->second;
  const AtomicId at = atomic_of(a);
  std::vector<TypeId> kids;
  if (k > 0) {
    for (Element e = 0; e < a.structure().size(); ++e) kids.push_back(type_of(a.extended(e), k - 1));
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
  }
  TypeId id = intern(k, at, std::move(kids));
  alive_.emplace(a.base.get(), a.base);
  generic_memo_.emplace(std::move(gkey), id);
  return id;
}

std::vector<Literal> TypeTable::literals(AtomicId id) const {
  const AtomicInfo& info = atomics_[id];
  std::vector<Literal> out;
  const std::size_t m = info.terms;
  std::size_t bit = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      Literal l;
      l.is_equality = true;
      l.positive = info.bits[bit++] != 0;
      l.args = {i, j};
      out.push_back(l);
    }
  const auto& rels = vocab_.relations();
  for (std::size_t r = 0; r < rels.size() && m > 0; ++r) {
    const std::size_t ar = rels[r].arity;
    std::vector<std::size_t> idx(ar, 0);
    while (true) {
      Literal l;
      l.rel = r;
      l.args = idx;
      l.positive = info.bits[bit++] != 0;
      out.push_back(l);
      std::size_t pos = ar;
      while (pos > 0 && ++idx[pos - 1] == m) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }
  return out;
}

bool TypeTable::literal_holds(const Literal& lit, AtomicId id) const {
  const AtomicInfo& info = atomics_[id];
  const std::size_t m = info.terms;
  std::size_t bit = 0;
  if (lit.is_equality) {
    const std::size_t i = lit.args[0], j = lit.args[1];
    // Offset of pair (i, j), i < j, in row-major upper-triangular order.
    bit = i * m - i * (i + 1) / 2 + (j - i - 1);
  } else {
    bit = m * (m - 1) / 2;
    for (std::size_t r = 0; r < lit.rel; ++r) {
      std::size_t cells = 1;
      for (std::size_t t = 0; t < vocab_.relations()[r].arity; ++t) cells *= m;
      bit += cells;
    }
    std::size_t idx = 0;
    for (std::size_t a : lit.args) idx = idx * m + a;
    bit += idx;
  }
  return (info.bits[bit] != 0) == lit.positive;
}

Formula TypeTable::literal_formula(const Literal& lit, std::size_t pins) const {
  auto term = [&](std::size_t i) {
    if (i < pins) return Term::var("x" + std::to_string(i + 1));
    return Term::constant(vocab_.constants()[i - pins]);
  };
  Formula atom;
  if (lit.is_equality) {
    atom = eq(term(lit.args[0]), term(lit.args[1]));
  } else {
    std::vector<Term> ts;
    for (std::size_t a : lit.args) ts.push_back(term(a));
    atom = rel(vocab_.relations()[lit.rel].name, std::move(ts));
  }
  return lit.positive ? atom : lnot(atom);
}

}  // namespace qgames
