#include "qgames/structure.hpp"

#include <algorithm>
#include <set>

#include "qgames/errors.hpp"

namespace qgames {

namespace {

constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

std::optional<std::size_t> dense_cells(std::size_t n, std::size_t arity) {
  std::size_t cells = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (n != 0 && cells > kDenseLimit / n) return std::nullopt;
    cells *= n;
  }
  return cells;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<RelationSymbol> relations,
                       std::vector<std::string> constants)
    : relations_(std::move(relations)), constants_(std::move(constants)) {
  std::set<std::string> names;
  for (const auto& r : relations_) {
    if (r.arity == 0) throw InvalidArgument("relation '" + r.name + "' has arity 0");
    if (r.name.empty()) throw InvalidArgument("empty relation name");
    if (!names.insert(r.name).second)
      throw InvalidArgument("duplicate symbol '" + r.name + "'");
  }
  for (const auto& c : constants_) {
    if (c.empty()) throw InvalidArgument("empty constant name");
    if (!names.insert(c).second) throw InvalidArgument("duplicate symbol '" + c + "'");
  }
}

std::optional<std::size_t> Vocabulary::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i)
    if (relations_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Vocabulary::constant_index(std::string_view name) const {
  for (std::size_t i = 0; i < constants_.size(); ++i)
    if (constants_[i] == name) return i;
  return std::nullopt;
}

Vocabulary Vocabulary::order() { return Vocabulary({{"<", 2}}); }
Vocabulary Vocabulary::graph() { return Vocabulary({{"E", 2}}); }
Vocabulary Vocabulary::graph_st() { return Vocabulary({{"E", 2}}, {"s", "t"}); }

Structure::Structure(Vocabulary vocab, std::size_t size,
                     std::vector<std::vector<Tuple>> tables,
                     std::vector<Element> constants)
    : vocab_(std::move(vocab)),
      size_(size),
      tables_(std::move(tables)),
      constants_(std::move(constants)) {
  const auto& rels = vocab_.relations();
  if (tables_.size() != rels.size())
    throw InvalidArgument("expected " + std::to_string(rels.size()) +
                          " relation tables, got " + std::to_string(tables_.size()));
  for (std::size_t r = 0; r < rels.size(); ++r) {
    auto& table = tables_[r];
    for (const auto& t : table) {
      if (t.size() != rels[r].arity)
        throw InvalidArgument("tuple of length " + std::to_string(t.size()) +
                              " in relation '" + rels[r].name + "' of arity " +
                              std::to_string(rels[r].arity));
      for (Element e : t)
        if (e >= size_)
          throw InvalidArgument("element " + std::to_string(e) + " outside universe of size " +
                                std::to_string(size_));
    }
    std::sort(table.begin(), table.end());
    table.erase(std::unique(table.begin(), table.end()), table.end());
  }
  if (constants_.size() != vocab_.constants().size())
    throw InvalidArgument("every constant must be mapped");
  for (Element c : constants_)
    if (c >= size_) throw InvalidArgument("constant outside universe");
  build_index();
}

void Structure::build_index() {
  dense_.assign(tables_.size(), {});
  const auto& rels = vocab_.relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    auto cells = dense_cells(size_, rels[r].arity);
    if (!cells || size_ == 0) continue;
    auto& bits = dense_[r];
    bits.assign((*cells + 63) / 64, 0);
    for (const auto& t : tables_[r]) {
      std::size_t idx = 0;
      for (std::size_t i = t.size(); i-- > 0;) idx = idx * size_ + t[i];
      bits[idx / 64] |= std::uint64_t{1} << (idx % 64);
    }
  }
}

bool Structure::holds(std::size_t rel, std::span<const Element> args) const {
  const auto& bits = dense_[rel];
  if (!bits.empty()) {
    std::size_t idx = 0;
    for (std::size_t i = args.size(); i-- > 0;) idx = idx * size_ + args[i];
    return (bits[idx / 64] >> (idx % 64)) & 1U;
  }
  const auto& table = tables_[rel];
  return std::binary_search(table.begin(), table.end(), Tuple(args.begin(), args.end()));
}

LabeledStructure::LabeledStructure(Structure s, std::vector<Element> p)
    : LabeledStructure(std::make_shared<const Structure>(std::move(s)), std::move(p)) {}

LabeledStructure::LabeledStructure(StructurePtr s, std::vector<Element> p)
    : base(std::move(s)), pins(std::move(p)) {
  if (!base) throw InvalidArgument("labeled structure without base");
  for (Element e : pins)
    if (e >= base->size()) throw InvalidArgument("pin " + std::to_string(e) + " out of range");
}

LabeledStructure LabeledStructure::extended(Element e) const {
  LabeledStructure out = *this;
  if (e >= base->size()) throw InvalidArgument("pin " + std::to_string(e) + " out of range");
  out.pins.push_back(e);
  return out;
}

TreeSpec::TreeSpec(std::vector<std::size_t> parent) : parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  if (n == 0) throw InvalidArgument("tree must have at least one node");
  std::size_t roots = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (parent_[i] == kRoot) {
      ++roots;
      root_ = i;
    } else if (parent_[i] >= n) {
      throw InvalidArgument("parent index out of range");
    }
  }
  if (roots != 1) throw InvalidArgument("tree must have exactly one root");
  // Every node must reach the root within n steps.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cur = i;
    std::size_t steps = 0;
    while (parent_[cur] != kRoot) {
      cur = parent_[cur];
      if (++steps > n) throw InvalidArgument("parent map is cyclic");
    }
  }
}

TreeSpec TreeSpec::path(std::size_t nodes) {
  if (nodes == 0) throw InvalidArgument("path tree needs at least one node");
  std::vector<std::size_t> parent(nodes);
  parent[0] = kRoot;
  for (std::size_t i = 1; i < nodes; ++i) parent[i] = i - 1;
  return TreeSpec(std::move(parent));
}

Structure make_linear_order(std::size_t k) {
  if (k == 0) throw InvalidArgument("linear order needs k >= 1");
  std::vector<Tuple> lt;
  lt.reserve(k * (k - 1) / 2);
  for (Element i = 0; i < k; ++i)
    for (Element j = i + 1; j < k; ++j) lt.push_back({i, j});
  return Structure(Vocabulary::order(), k, {std::move(lt)});
}

Structure make_tree(const TreeSpec& spec) {
  // Path trees are numbered so that they coincide with make_linear_order:
  // element index = number of strict descendants on the chain.  In general,
  // nodes are renumbered by a post-order traversal, which makes every node
  // larger than all of its descendants.
  const std::size_t n = spec.size();
  std::vector<std::vector<std::size_t>> children(n);
  for (std::size_t i = 0; i < n; ++i)
    if (spec.parent(i) != TreeSpec::kRoot) children[spec.parent(i)].push_back(i);
  std::vector<Element> label(n);
  Element next = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{spec.root(), 0}};
  while (!stack.empty()) {
    auto& [node, child] = stack.back();
    if (child < children[node].size()) {
      std::size_t c = children[node][child++];
      stack.push_back({c, 0});
    } else {
      label[node] = next++;
      stack.pop_back();
    }
  }
  std::vector<Tuple> lt;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = spec.parent(i); a != TreeSpec::kRoot; a = spec.parent(a))
      lt.push_back({label[i], label[a]});
  return Structure(Vocabulary::order(), n, {std::move(lt)});
}

std::size_t tree_depth(const TreeSpec& spec) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::size_t d = 1;
    for (std::size_t a = spec.parent(i); a != TreeSpec::kRoot; a = spec.parent(a)) ++d;
    best = std::max(best, d);
  }
  return best;
}

TreeSpec two_branch_tree(std::size_t len1, std::size_t len2) {
  if (len1 == 0 || len2 == 0) throw InvalidArgument("branch lengths must be >= 1");
  std::vector<std::size_t> parent{TreeSpec::kRoot};
  auto hang = [&](std::size_t len) {
    std::size_t prev = 0;
    for (std::size_t i = 1; i < len; ++i) {
      parent.push_back(prev);
      prev = parent.size() - 1;
    }
  };
  hang(len1);
  hang(len2);
  return TreeSpec(std::move(parent));
}

TreeSpec decorated_tree(std::size_t main_length, std::size_t offshoot_length) {
  if (main_length == 0) throw InvalidArgument("main branch length must be >= 1");
  std::vector<std::size_t> parent{TreeSpec::kRoot};
  std::vector<std::size_t> main{0};
  for (std::size_t i = 1; i < main_length; ++i) {
    parent.push_back(main.back());
    main.push_back(parent.size() - 1);
  }
  for (std::size_t i = 0; i + 1 < main.size(); ++i) {
    std::size_t prev = main[i];
    for (std::size_t j = 0; j < offshoot_length; ++j) {
      parent.push_back(prev);
      prev = parent.size() - 1;
    }
  }
  return TreeSpec(std::move(parent));
}

Structure disjoint_union(std::span<const Structure> parts) {
  if (parts.empty()) throw InvalidArgument("disjoint union of no parts");
  const Vocabulary& vocab = parts.front().vocabulary();
  if (!vocab.constants().empty())
    throw InvalidArgument("disjoint union requires a constant-free vocabulary");
  std::vector<std::vector<Tuple>> tables(vocab.relations().size());
  Element offset = 0;
  for (const auto& p : parts) {
    if (!(p.vocabulary() == vocab)) throw InvalidArgument("mismatched vocabularies");
    for (std::size_t r = 0; r < tables.size(); ++r)
      for (Tuple t : p.tuples(r)) {
        for (auto& e : t) e += offset;
        tables[r].push_back(std::move(t));
      }
    offset += static_cast<Element>(p.size());
  }
  return Structure(vocab, offset, std::move(tables));
}

Structure delete_element(const Structure& s, Element p) {
  if (p >= s.size()) throw InvalidArgument("element out of range");
  for (Element c : s.constants())
    if (c == p) throw InvalidArgument("cannot delete an element named by a constant");
  auto shift = [p](Element e) { return e > p ? e - 1 : e; };
  std::vector<std::vector<Tuple>> tables(s.vocabulary().relations().size());
  for (std::size_t r = 0; r < tables.size(); ++r)
    for (const auto& t : s.tuples(r)) {
      if (std::find(t.begin(), t.end(), p) != t.end()) continue;
      Tuple u;
      u.reserve(t.size());
      for (Element e : t) u.push_back(shift(e));
      tables[r].push_back(std::move(u));
    }
  std::vector<Element> consts;
  for (Element c : s.constants()) consts.push_back(shift(c));
  return Structure(s.vocabulary(), s.size() - 1, std::move(tables), std::move(consts));
}

Structure apex_extension(const Structure& c) {
  const auto& vocab = c.vocabulary();
  if (vocab.relations().size() != 1 || vocab.relations()[0].arity != 2 ||
      !vocab.constants().empty())
    throw InvalidArgument("apex extension needs a single binary relation and no constants");
  auto tuples = c.tuples(0);
  const auto apex = static_cast<Element>(c.size());
  for (Element v = 0; v < apex; ++v) tuples.push_back({apex, v});
  return Structure(vocab, c.size() + 1, {std::move(tuples)});
}

Structure directed_path(std::size_t length) {
  std::vector<Tuple> edges;
  for (Element i = 0; i < length; ++i) edges.push_back({i, i + 1});
  return Structure(Vocabulary::graph_st(), length + 1, {std::move(edges)},
                   {0, static_cast<Element>(length)});
}

Structure two_disjoint_edges() { return Structure(Vocabulary::graph(), 4, {{{0, 1}, {2, 3}}}); }

Structure three_edge_path() { return Structure(Vocabulary::graph(), 4, {{{0, 1}, {1, 2}, {2, 3}}}); }

bool partial_isomorphism(const LabeledStructure& a, const LabeledStructure& b) {
  if (a.pins.size() != b.pins.size()) throw InvalidArgument("pin-count mismatch");
  const Structure& sa = a.structure();
  const Structure& sb = b.structure();
  if (!(sa.vocabulary() == sb.vocabulary())) throw InvalidArgument("vocabulary mismatch");
  std::vector<Element> ta = a.pins;
  std::vector<Element> tb = b.pins;
  ta.insert(ta.end(), sa.constants().begin(), sa.constants().end());
  tb.insert(tb.end(), sb.constants().begin(), sb.constants().end());
  const std::size_t m = ta.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if ((ta[i] == ta[j]) != (tb[i] == tb[j])) return false;
  const auto& rels = sa.vocabulary().relations();
  for (std::size_t r = 0; r < rels.size(); ++r) {
    const std::size_t ar = rels[r].arity;
    std::vector<std::size_t> idx(ar, 0);
    std::vector<Element> xa(ar), xb(ar);
    if (m == 0) break;
    while (true) {
      for (std::size_t i = 0; i < ar; ++i) {
        xa[i] = ta[idx[i]];
        xb[i] = tb[idx[i]];
      }
      if (sa.holds(r, xa) != sb.holds(r, xb)) return false;
      std::size_t pos = 0;
      while (pos < ar && ++idx[pos] == m) idx[pos++] = 0;
      if (pos == ar) break;
    }
  }
  return true;
}

bool is_linear_order(const Structure& s, std::vector<std::size_t>* rank) {
  const auto& vocab = s.vocabulary();
  if (vocab.relations().size() != 1 || vocab.relations()[0].arity != 2 ||
      !vocab.constants().empty())
    return false;
  const std::size_t n = s.size();
  if (s.tuples(0).size() != n * (n - 1) / 2 && n > 0) return false;
  std::vector<std::size_t> below(n, 0);
  for (const auto& t : s.tuples(0)) {
    if (t[0] == t[1]) return false;
    ++below[t[1]];
  }
  std::vector<std::size_t> sorted = below;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i)
    if (sorted[i] != i) return false;
  // Ranks are a permutation and the pair count is exact, so the relation is
  // the total order by rank iff every pair respects the ranks.
  for (const auto& t : s.tuples(0))
    if (below[t[0]] >= below[t[1]]) return false;
  if (rank) *rank = std::move(below);
  return true;
}

}  // namespace qgames
