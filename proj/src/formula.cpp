#include "qgames/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "qgames/errors.hpp"

namespace qgames {

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

bool is_quantifier(NodeKind k) { return k == NodeKind::Exists || k == NodeKind::Forall; }

}  // namespace

Term var(std::string n) { return Term::var(std::move(n)); }

Formula rel(std::string name, std::vector<Term> terms) {
  if (terms.empty()) throw InvalidArgument("relation atom without arguments");
  Node n;
  n.kind = NodeKind::Rel;
  n.rel = std::move(name);
  n.terms = std::move(terms);
  return make(std::move(n));
}

Formula lt(const Term& a, const Term& b) { return rel("<", {a, b}); }

Formula eq(const Term& a, const Term& b) {
  Node n;
  n.kind = NodeKind::Eq;
  n.terms = {a, b};
  return make(std::move(n));
}

Formula neq(const Term& a, const Term& b) { return lnot(eq(a, b)); }

Formula lnot(Formula f) {
  Node n;
  n.kind = NodeKind::Not;
  n.children = {std::move(f)};
  return make(std::move(n));
}

Formula land(std::vector<Formula> fs) {
  if (fs.empty()) throw InvalidArgument("empty conjunction");
  Node n;
  n.kind = NodeKind::And;
  n.children = std::move(fs);
  return make(std::move(n));
}

Formula lor(std::vector<Formula> fs) {
  if (fs.empty()) throw InvalidArgument("empty disjunction");
  Node n;
  n.kind = NodeKind::Or;
  n.children = std::move(fs);
  return make(std::move(n));
}

Formula implies(Formula a, Formula b) {
  Node n;
  n.kind = NodeKind::Implies;
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula exists(std::string v, Formula body) {
  Node n;
  n.kind = NodeKind::Exists;
  n.var = std::move(v);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula forall(std::string v, Formula body) {
  Node n;
  n.kind = NodeKind::Forall;
  n.var = std::move(v);
  n.children = {std::move(body)};
  return make(std::move(n));
}

Formula chain_lt(const std::vector<Term>& terms) {
  if (terms.size() < 2) throw InvalidArgument("chain< needs at least two terms");
  if (terms.size() == 2) return lt(terms[0], terms[1]);
  std::vector<Formula> parts;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) parts.push_back(lt(terms[i], terms[i + 1]));
  return land(std::move(parts));
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->rel != b->rel || a->terms != b->terms || a->var != b->var ||
      a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!structurally_equal(a->children[i], b->children[i])) return false;
  return true;
}

// ---------------------------------------------------------------- parser

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab) : vocab_(vocab) { lex(text); }

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Token::Kind::End) fail("unexpected trailing input", peek());
    return f;
  }

 private:
  void lex(std::string_view text) {
    std::size_t line = 1, col = 1;
    std::size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') {
        ++line;
        col = 1;
        ++i;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col;
        ++i;
      } else if (c == '(' || c == ')') {
        tokens_.push_back({c == '(' ? Token::Kind::Open : Token::Kind::Close, std::string(1, c),
                           line, col});
        ++col;
        ++i;
      } else {
        std::size_t start = i;
        std::size_t start_col = col;
        while (i < text.size() && text[i] != '(' && text[i] != ')' &&
               !std::isspace(static_cast<unsigned char>(text[i]))) {
          ++i;
          ++col;
        }
        tokens_.push_back(
            {Token::Kind::Atom, std::string(text.substr(start, i - start)), line, start_col});
      }
    }
    tokens_.push_back({Token::Kind::End, "", line, col});
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  void expect(Token::Kind k, const char* what) {
    const Token& t = next();
    if (t.kind != k) fail(std::string("expected ") + what, t);
  }

  Term term() {
    const Token& t = next();
    if (t.kind != Token::Kind::Atom) fail("expected a term", t);
    if (vocab_.constant_index(t.text)) return Term::constant(t.text);
    return Term::var(t.text);
  }

  Formula formula() {
    const Token& open = next();
    if (open.kind != Token::Kind::Open) fail("expected '('", open);
    const Token head = next();
    if (head.kind != Token::Kind::Atom) fail("expected an operator", head);
    const std::string& h = head.text;
    Formula out;
    if (h == "exists" || h == "forall") {
      const Token& v = next();
      if (v.kind != Token::Kind::Atom) fail("expected a variable name", v);
      if (vocab_.constant_index(v.text)) fail("cannot bind constant '" + v.text + "'", v);
      std::string name = v.text;
      Formula body = formula();
      out = h == "exists" ? exists(std::move(name), std::move(body))
                          : forall(std::move(name), std::move(body));
    } else if (h == "not") {
      out = lnot(formula());
    } else if (h == "and" || h == "or") {
      std::vector<Formula> parts;
      while (peek().kind == Token::Kind::Open) parts.push_back(formula());
      if (parts.empty()) fail("'" + h + "' needs at least one operand", peek());
      out = h == "and" ? land(std::move(parts)) : lor(std::move(parts));
    } else if (h == "implies") {
      Formula a = formula();
      Formula b = formula();
      out = implies(std::move(a), std::move(b));
    } else if (h == "=") {
      Term a = term();
      Term b = term();
      out = eq(a, b);
    } else if (h == "chain<") {
      if (!vocab_.relation_index("<")) fail("unknown relation '<'", head);
      std::vector<Term> ts;
      while (peek().kind == Token::Kind::Atom) ts.push_back(term());
      if (ts.size() < 2) fail("chain< needs at least two terms", peek());
      out = chain_lt(ts);
    } else {
      auto idx = vocab_.relation_index(h);
      if (!idx) fail("unknown relation '" + h + "'", head);
      std::vector<Term> ts;
      while (peek().kind == Token::Kind::Atom) ts.push_back(term());
      const std::size_t arity = vocab_.relations()[*idx].arity;
      if (ts.size() != arity)
        fail("relation '" + h + "' expects " + std::to_string(arity) + " arguments, got " +
                 std::to_string(ts.size()),
             head);
      out = rel(h, std::move(ts));
    }
    expect(Token::Kind::Close, "')'");
    return out;
  }

  const Vocabulary& vocab_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

void print_to(const Formula& f, std::string& out) {
  auto term = [&](const Term& t) {
    out += ' ';
    out += t.name;
  };
  out += '(';
  switch (f->kind) {
    case NodeKind::Rel:
      out += f->rel;
      for (const auto& t : f->terms) term(t);
      break;
    case NodeKind::Eq:
      out += '=';
      for (const auto& t : f->terms) term(t);
      break;
    case NodeKind::Not:
    case NodeKind::And:
    case NodeKind::Or:
    case NodeKind::Implies:
      out += f->kind == NodeKind::Not   ? "not"
             : f->kind == NodeKind::And ? "and"
             : f->kind == NodeKind::Or  ? "or"
                                        : "implies";
      for (const auto& c : f->children) {
        out += ' ';
        print_to(c, out);
      }
      break;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += f->kind == NodeKind::Exists ? "exists " : "forall ";
      out += f->var;
      out += ' ';
      print_to(f->children[0], out);
      break;
  }
  out += ')';
}

}  // namespace

Formula parse(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, vocab).parse_all();
}

std::string print(const Formula& f) {
  std::string out;
  print_to(f, out);
  return out;
}

void check_formula(const Formula& f, const Vocabulary& vocab) {
  for (const auto& t : f->terms)
    if (t.kind == Term::Kind::Const && !vocab.constant_index(t.name))
      throw InvalidArgument("unknown constant '" + t.name + "'");
  if (f->kind == NodeKind::Rel) {
    auto idx = vocab.relation_index(f->rel);
    if (!idx) throw InvalidArgument("unknown relation '" + f->rel + "'");
    if (vocab.relations()[*idx].arity != f->terms.size())
      throw InvalidArgument("arity mismatch for relation '" + f->rel + "'");
  }
  for (const auto& c : f->children) check_formula(c, vocab);
}

// -------------------------------------------------------------- measures

std::size_t quants(const Formula& f) {
  std::size_t n = is_quantifier(f->kind) ? 1 : 0;
  for (const auto& c : f->children) n += quants(c);
  return n;
}

std::size_t qrank(const Formula& f) {
  std::size_t m = 0;
  for (const auto& c : f->children) m = std::max(m, qrank(c));
  return m + (is_quantifier(f->kind) ? 1 : 0);
}

namespace {

void collect_bound(const Formula& f, std::set<std::string>& out) {
  if (is_quantifier(f->kind)) out.insert(f->var);
  for (const auto& c : f->children) collect_bound(c, out);
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  for (const auto& t : f->terms)
    if (t.kind == Term::Kind::Var &&
        std::find(bound.begin(), bound.end(), t.name) == bound.end())
      out.insert(t.name);
  if (is_quantifier(f->kind)) bound.push_back(f->var);
  for (const auto& c : f->children) collect_free(c, bound, out);
  if (is_quantifier(f->kind)) bound.pop_back();
}

}  // namespace

std::size_t bound_var_count(const Formula& f) {
  std::set<std::string> names;
  collect_bound(f, names);
  return names.size();
}

std::set<std::string> free_vars(const Formula& f) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(f, bound, out);
  return out;
}

bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

// -------------------------------------------------------- transformations

namespace {

// Binder names along the leftmost quantifier path of maximal depth.
void deepest_path(const Formula& f, std::vector<std::string>& out) {
  if (is_quantifier(f->kind)) out.push_back(f->var);
  const Formula* best = nullptr;
  std::size_t best_rank = 0;
  for (const auto& c : f->children) {
    std::size_t r = qrank(c);
    if (!best || r > best_rank) {
      best = &c;
      best_rank = r;
    }
  }
  if (best && best_rank > 0) deepest_path(*best, out);
}

Formula rename_bound(const Formula& f, std::size_t depth, const std::vector<std::string>& pool,
                     std::map<std::string, std::string>& scope) {
  Node n = *f;
  for (auto& t : n.terms)
    if (t.kind == Term::Kind::Var) {
      auto it = scope.find(t.name);
      if (it != scope.end()) t.name = it->second;
    }
  if (is_quantifier(f->kind)) {
    const std::string& fresh = pool[depth];
    auto saved = scope.find(f->var);
    std::optional<std::string> old;
    if (saved != scope.end()) old = saved->second;
    scope[f->var] = fresh;
    n.var = fresh;
    n.children = {rename_bound(f->children[0], depth + 1, pool, scope)};
    if (old)
      scope[f->var] = *old;
    else
      scope.erase(f->var);
  } else {
    for (auto& c : n.children) c = rename_bound(c, depth, pool, scope);
  }
  return make(std::move(n));
}

}  // namespace

Formula minimize_bound_vars(const Formula& f) {
  std::vector<std::string> pool;
  deepest_path(f, pool);
  const std::set<std::string> free = free_vars(f);
  std::set<std::string> used(free.begin(), free.end());
  std::size_t counter = 1;
  for (auto& name : pool) {
    if (used.count(name)) {
      std::string candidate;
      do candidate = "x" + std::to_string(counter++);
      while (used.count(candidate));
      name = candidate;
    }
    used.insert(name);
  }
  std::map<std::string, std::string> scope;
  return rename_bound(f, 0, pool, scope);
}

std::optional<std::string> prenex_signature(const Formula& f) {
  std::string sig;
  Formula cur = f;
  while (is_quantifier(cur->kind)) {
    sig += cur->kind == NodeKind::Exists ? "∃" : "∀";
    cur = cur->children[0];
  }
  if (quants(cur) != 0) return std::nullopt;
  return sig;
}

Formula relativize(const Formula& f, const std::string& pivot, Direction dir,
                   const std::string& order_rel) {
  std::set<std::string> bound;
  collect_bound(f, bound);
  if (bound.count(pivot))
    throw InvalidArgument("pivot '" + pivot + "' is bound inside the formula");
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    if (g->children.empty()) return g;
    Node n = *g;
    for (auto& c : n.children) c = go(c);
    if (is_quantifier(g->kind)) {
      Formula guard = dir == Direction::Above ? rel(order_rel, {var(pivot), var(g->var)})
                                              : rel(order_rel, {var(g->var), var(pivot)});
      n.children[0] = g->kind == NodeKind::Forall ? implies(guard, n.children[0])
                                                  : land({guard, n.children[0]});
    }
    return make(std::move(n));
  };
  return go(f);
}

Formula rename_free(const Formula& f, const std::map<std::string, std::string>& mapping) {
  std::function<Formula(const Formula&, std::vector<std::string>&)> go =
      [&](const Formula& g, std::vector<std::string>& bound) -> Formula {
    Node n = *g;
    for (auto& t : n.terms) {
      if (t.kind != Term::Kind::Var) continue;
      if (std::find(bound.begin(), bound.end(), t.name) != bound.end()) continue;
      auto it = mapping.find(t.name);
      if (it == mapping.end()) continue;
      if (std::find(bound.begin(), bound.end(), it->second) != bound.end())
        throw InvalidArgument("renaming '" + t.name + "' to '" + it->second +
                              "' would be captured");
      t.name = it->second;
    }
    if (is_quantifier(g->kind)) bound.push_back(g->var);
    for (auto& c : n.children) c = go(c, bound);
    if (is_quantifier(g->kind)) bound.pop_back();
    return make(std::move(n));
  };
  std::vector<std::string> bound;
  return go(f, bound);
}

// ------------------------------------------------------------ evaluation

struct CompiledFormula::Op {
  NodeKind kind;
  std::size_t rel = 0;
  // Argument sources: slot index, or ~index for constants.
  std::vector<std::int64_t> args;
  std::vector<std::unique_ptr<Op>> kids;
  std::size_t slot = 0;
  bool innermost = false;
  // Set when the bound variable occurs only in equalities with terms
  // bound outside this quantifier (listed here); see run_op.
  bool equality_only = false;
  std::vector<std::int64_t> eq_terms;
};

namespace {

using Op = CompiledFormula::Op;

struct EvalContext {
  const Structure* s;
  std::vector<Element> env;
  EvalStats* stats;
  // read[slot] is set whenever the slot's value is consulted.
  std::vector<char> read;
};

inline Element arg_value(EvalContext& ctx, std::int64_t a) {
  if (a < 0) return ctx.s->constant(static_cast<std::size_t>(~a));
  ctx.read[static_cast<std::size_t>(a)] = 1;
  return ctx.env[static_cast<std::size_t>(a)];
}

// Evaluation is deterministic in the values it reads.  Two shortcuts for
// a quantifier over slot y follow from that:
//  * if evaluating the body never read y, every other value of y takes
//    the same path and gives the same result, so the loop can stop;
//  * if y occurs only in equalities with terms bound outside the
//    quantifier, any two values equal to none of those terms agree on
//    every atom mentioning y, so one such value stands for all of them.
bool quantify(const Op& op, EvalContext& ctx, Element e, bool want, bool& done);

bool run_op(const Op& op, EvalContext& ctx) {
  switch (op.kind) {
    case NodeKind::Rel: {
      Element buf[8];
      if (op.args.size() <= 8) {
        for (std::size_t i = 0; i < op.args.size(); ++i) buf[i] = arg_value(ctx, op.args[i]);
        return ctx.s->holds(op.rel, std::span<const Element>(buf, op.args.size()));
      }
      std::vector<Element> big;
      for (auto a : op.args) big.push_back(arg_value(ctx, a));
      return ctx.s->holds(op.rel, big);
    }
    case NodeKind::Eq:
      return arg_value(ctx, op.args[0]) == arg_value(ctx, op.args[1]);
    case NodeKind::Not:
      return !run_op(*op.kids[0], ctx);
    case NodeKind::And:
      for (const auto& k : op.kids)
        if (!run_op(*k, ctx)) return false;
      return true;
    case NodeKind::Or:
      for (const auto& k : op.kids)
        if (run_op(*k, ctx)) return true;
      return false;
    case NodeKind::Implies:
      return !run_op(*op.kids[0], ctx) || run_op(*op.kids[1], ctx);
    case NodeKind::Exists:
    case NodeKind::Forall: {
      const bool want = op.kind == NodeKind::Exists;
      const auto n = static_cast<Element>(ctx.s->size());
      bool done = false;
      if (op.equality_only) {
        Element vals[16];
        std::size_t k = 0;
        std::vector<Element> many;
        Element* v = vals;
        if (op.eq_terms.size() > 16) {
          many.resize(op.eq_terms.size());
          v = many.data();
        }
        for (auto t : op.eq_terms) v[k++] = arg_value(ctx, t);
        std::sort(v, v + k);
        k = static_cast<std::size_t>(std::unique(v, v + k) - v);
        for (std::size_t i = 0; i < k; ++i) {
          const bool r = quantify(op, ctx, v[i], want, done);
          if (done) return r;
        }
        // The least element equal to no listed term.
        Element fresh = 0;
        for (std::size_t i = 0; i < k && v[i] == fresh; ++i) ++fresh;
        if (fresh < n) {
          const bool r = quantify(op, ctx, fresh, want, done);
          if (done) return r;
        }
        return !want;
      }
      for (Element e = 0; e < n; ++e) {
        const bool r = quantify(op, ctx, e, want, done);
        if (done) return r;
      }
      return !want;
    }
  }
  return false;
}

bool quantify(const Op& op, EvalContext& ctx, Element e, bool want, bool& done) {
  ctx.env[op.slot] = e;
  ctx.read[op.slot] = 0;
  if (ctx.stats) {
    ++ctx.stats->bindings;
    if (op.innermost) ++ctx.stats->complete_assignments;
  }
  const bool r = run_op(*op.kids[0], ctx);
  if (r == want) {
    done = true;
    return want;
  }
  if (!ctx.read[op.slot]) {
    done = true;
    return !want;
  }
  return r;
}

// Whether slot `y` occurs only in equalities whose other side is bound
// outside `op` (slots below `first_inner`, or constants); collects those.
bool equality_only(const Op& op, std::size_t y, std::size_t first_inner,
                   std::vector<std::int64_t>& terms) {
  const auto is_y = [&](std::int64_t a) { return a >= 0 && static_cast<std::size_t>(a) == y; };
  if (op.kind == NodeKind::Rel) {
    for (auto a : op.args)
      if (is_y(a)) return false;
    return true;
  }
  if (op.kind == NodeKind::Eq) {
    for (int i = 0; i < 2; ++i) {
      if (!is_y(op.args[i])) continue;
      const std::int64_t other = op.args[1 - i];
      if (is_y(other)) return true;
      if (other >= 0 && static_cast<std::size_t>(other) >= first_inner) return false;
      terms.push_back(other);
    }
    return true;
  }
  for (const auto& k : op.kids)
    if (!equality_only(*k, y, first_inner, terms)) return false;
  return true;
}

class Compiler {
 public:
  Compiler(const Vocabulary& vocab, const std::vector<std::string>& free) : vocab_(vocab) {
    for (const auto& v : free) scope_.push_back({v, slots_++});
  }

  std::unique_ptr<Op> compile(const Formula& f) {
    auto op = std::make_unique<Op>();
    op->kind = f->kind;
    if (f->kind == NodeKind::Rel) {
      auto idx = vocab_.relation_index(f->rel);
      if (!idx) throw InvalidArgument("unknown relation '" + f->rel + "'");
      if (vocab_.relations()[*idx].arity != f->terms.size())
        throw InvalidArgument("arity mismatch for relation '" + f->rel + "'");
      op->rel = *idx;
    }
    for (const auto& t : f->terms) op->args.push_back(resolve(t));
    if (is_quantifier(f->kind)) {
      op->slot = slots_++;
      scope_.push_back({f->var, op->slot});
      op->kids.push_back(compile(f->children[0]));
      scope_.pop_back();
      op->innermost = quants(f->children[0]) == 0;
      // Slots are numbered in binding order, so the body's binders are
      // exactly the slots after this one.
      std::vector<std::int64_t> terms;
      if (equality_only(*op->kids[0], op->slot, op->slot + 1, terms)) {
        op->equality_only = true;
        std::sort(terms.begin(), terms.end());
        terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
        op->eq_terms = std::move(terms);
      }
    } else {
      for (const auto& c : f->children) op->kids.push_back(compile(c));
    }
    return op;
  }

  std::size_t slots() const { return slots_; }

 private:
  std::int64_t resolve(const Term& t) const {
    if (t.kind == Term::Kind::Const) {
      auto idx = vocab_.constant_index(t.name);
      if (!idx) throw InvalidArgument("unknown constant '" + t.name + "'");
      return ~static_cast<std::int64_t>(*idx);
    }
    for (std::size_t i = scope_.size(); i-- > 0;)
      if (scope_[i].first == t.name) return static_cast<std::int64_t>(scope_[i].second);
    throw InvalidArgument("free variable '" + t.name + "' is not assigned");
  }

  const Vocabulary& vocab_;
  std::vector<std::pair<std::string, std::size_t>> scope_;
  std::size_t slots_ = 0;
};

}  // namespace

CompiledFormula::CompiledFormula(const Formula& f, const Vocabulary& vocab) : vocab_(vocab) {
  auto fv = free_vars(f);
  free_.assign(fv.begin(), fv.end());
  Compiler c(vocab_, free_);
  root_ = c.compile(f);
  slots_ = c.slots();
}

bool CompiledFormula::run(const Structure& s, const std::vector<Element>& free_values,
                          EvalStats* stats) const {
  if (!(s.vocabulary() == vocab_)) throw InvalidArgument("vocabulary mismatch");
  if (free_values.size() != free_.size())
    throw InvalidArgument("expected " + std::to_string(free_.size()) + " free-variable values");
  EvalContext ctx{&s, std::vector<Element>(slots_, 0), stats, std::vector<char>(slots_, 0)};
  for (std::size_t i = 0; i < free_values.size(); ++i) {
    if (free_values[i] >= s.size()) throw InvalidArgument("assigned element outside universe");
    ctx.env[i] = free_values[i];
  }
  return run_op(*root_, ctx);
}

bool evaluate(const Structure& s, const Formula& f, const Assignment& env, EvalStats* stats) {
  CompiledFormula c(f, s.vocabulary());
  std::vector<Element> values;
  for (const auto& v : c.free_variables()) {
    auto it = env.find(v);
    if (it == env.end()) throw InvalidArgument("free variable '" + v + "' is not assigned");
    values.push_back(it->second);
  }
  return c.run(s, values, stats);
}

}  // namespace qgames
