#include "qgames/acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <optional>
#include <random>
#include <sstream>

#include "qgames/canonical.hpp"
#include "qgames/errors.hpp"
#include "qgames/formula.hpp"
#include "qgames/game.hpp"
#include "qgames/generators.hpp"
#include "qgames/growth.hpp"
#include "qgames/harmony.hpp"
#include "qgames/oracles.hpp"

namespace qgames {

namespace {

using Set = std::vector<Structure>;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// M-S instances decided by the games suite, replayed by the constructive
// check.
struct Instance {
  std::string label;
  Set a, b;
  std::size_t r;
  Player winner;
};

struct Context {
  std::vector<Instance> instances;
};

std::string join(const std::vector<std::string>& parts, const char* sep = "; ") {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

std::string tree_text(const TreeSpec& t) {
  std::string s = "parents [";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t.parent(i) == TreeSpec::kRoot ? "-" : std::to_string(t.parent(i));
  }
  return s + "]";
}

std::string big_list(const std::vector<BigInt>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x.str();
  return s;
}

// ------------------------------------------------------------- tables

Outcome table_reproduction(Context&) {
  const std::vector<BigInt> f{3, 7, 15, 31, 63, 127, 255, 511, 1023};
  const std::vector<BigInt> g{2, 4, 10, 21, 42, 85, 170, 341, 682};
  const std::vector<BigInt> t{2, 4, 8, 16, 28, 60, 104, 232, 404};
  std::vector<BigInt> gf, gg, gt;
  for (const GrowthRow& row : growth_table(10)) {
    gf.push_back(row.f);
    gg.push_back(row.g);
    gt.push_back(row.t);
  }
  Outcome o;
  o.pass = gf == f && gg == g && gt == t;
  o.detail = "r=2..10 f=" + big_list(gf) + " g=" + big_list(gg) + " t=" + big_list(gt);
  return o;
}

Outcome closed_form_recurrence(Context&) {
  std::vector<std::string> bad;
  for (std::size_t r = 2; r <= 40; ++r)
    if (t_tree(r) != t_tree_recurrence(r)) bad.push_back("t(" + std::to_string(r) + ")");
  for (std::size_t r = 3; r <= 40; r += 2)
    if (g_forall(r) != g_forall_recurrence(r)) bad.push_back("g_forall(" + std::to_string(r) + ")");
  for (std::size_t r = 4; r <= 40; r += 2)
    if (g_exists(r) != g_exists_recurrence(r)) bad.push_back("g_exists(" + std::to_string(r) + ")");
  return {bad.empty(), bad.empty() ? "t, g_forall, g_exists agree for all r <= 40"
                                   : "mismatch: " + join(bad, ", ")};
}

// ------------------------------------------------------------- measures

// Binders mostly take fresh names, so sibling quantifiers use different
// variables and the sentence often binds more names than its rank; some
// reuse a random name to exercise shadowing.
Formula random_formula(std::mt19937_64& rng, const Vocabulary& vocab, std::size_t budget,
                       std::vector<std::string>& scope, std::size_t& fresh) {
  auto coin = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const bool binary = !vocab.relations().empty();
  if (budget == 0 || (!scope.empty() && coin(0.1))) {
    if (scope.empty()) return eq(Term::var("x1"), Term::var("x1"));  // unreachable for sentences
    const Term s = Term::var(scope[below(scope.size())]);
    const Term t = Term::var(scope[below(scope.size())]);
    Formula atom = !binary || coin(0.25) ? eq(s, t)
                                         : rel(vocab.relations()[0].name, {s, t});
    return coin(0.3) ? lnot(atom) : atom;
  }
  if (scope.empty() || coin(0.35)) {
    const std::string v = "x" + std::to_string(coin(0.8) ? ++fresh : 1 + below(6));
    scope.push_back(v);
    Formula body = random_formula(rng, vocab, budget - 1, scope, fresh);
    scope.pop_back();
    return coin(0.5) ? exists(v, body) : forall(v, body);
  }
  const std::size_t left = below(budget + 1);
  Formula a = random_formula(rng, vocab, left, scope, fresh);
  Formula b = random_formula(rng, vocab, budget - left, scope, fresh);
  switch (below(4)) {
    case 0: return land({a, b});
    case 1: return lor({a, b});
    case 2: return implies(a, b);
    default: return lnot(land({a, b}));
  }
}

Outcome prop_1_1(Context&) {
  std::mt19937_64 rng(20260101);
  const std::vector<Vocabulary> vocabs{Vocabulary::order(), Vocabulary::graph()};
  std::vector<std::vector<Structure>> universe(2);
  for (std::size_t v = 0; v < 2; ++v)
    for (std::size_t n = 0; n <= 4; ++n)
      for (Structure& s : enumerate_structures_up_to_iso(vocabs[v], n))
        universe[v].push_back(std::move(s));
  std::size_t count = 0, structures = 0, reduced = 0;
  std::vector<std::string> bad;
  while (count < 200) {
    const std::size_t v = count % 2;
    std::vector<std::string> scope;
    std::size_t fresh = 0;
    const Formula f = random_formula(rng, vocabs[v], 1 + rng() % 6, scope, fresh);
    if (!is_sentence(f) || quants(f) > 6) continue;
    ++count;
    const Formula m = minimize_bound_vars(f);
    if (bound_var_count(f) > qrank(f)) ++reduced;
    if (bound_var_count(m) > qrank(f) || quants(m) != quants(f) || qrank(m) != qrank(f))
      bad.push_back("measures of " + print(f));
    const CompiledFormula cf(f, vocabs[v]), cm(m, vocabs[v]);
    for (const Structure& s : universe[v]) {
      ++structures;
      if (cf.run(s) != cm.run(s)) {
        bad.push_back("inequivalent on a " + std::to_string(s.size()) + "-element structure: " +
                      print(f));
        break;
      }
    }
  }
  std::ostringstream d;
  d << count << " random sentences ({<} and {E}, <= 6 quantifiers), " << structures
    << " evaluations on all structures with <= 4 elements up to isomorphism; " << reduced
    << " sentences started with more bound variables than their rank";
  if (!bad.empty()) d << "; failures: " << join(bad);
  return {bad.empty(), d.str()};
}

// ------------------------------------------------------------- games

Player ms(Context& ctx, const std::string& label, const Set& a, const Set& b, std::size_t r,
          const MsOptions& opts = {}) {
  const Player w = solve_ms(a, b, r, opts).winner;
  ctx.instances.push_back({label, a, b, r, w});
  return w;
}

Outcome ef_thresholds(Context&) {
  std::vector<std::string> bad;
  std::size_t games = 0;
  for (std::size_t r = 0; r <= 4; ++r)
    for (std::size_t a = 1; a <= 16; ++a)
      for (std::size_t b = a + 1; b <= 16; ++b) {
        ++games;
        const bool dup =
            solve_ef(make_linear_order(a), make_linear_order(b), r).winner == Player::Duplicator;
        if (dup != (a + 1 >= (std::size_t{1} << r)))
          bad.push_back("r=" + std::to_string(r) + " (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
      }
  return {bad.empty(), std::to_string(games) + " games, r <= 4, 1 <= a < b <= 16" +
                           (bad.empty() ? "" : "; wrong: " + join(bad, ", "))};
}

Outcome ms_thresholds(Context& ctx) {
  std::vector<std::string> bad;
  std::size_t games = 0;
  for (std::size_t r = 1; r <= 3; ++r)
    for (std::size_t a = 1; a <= 6; ++a)
      for (std::size_t b = a + 1; b <= 6; ++b) {
        ++games;
        const std::string label = "l.o.(" + std::to_string(a) + ") vs l.o.(" +
                                  std::to_string(b) + ") r=" + std::to_string(r);
        const bool dup = ms(ctx, label, {make_linear_order(a)}, {make_linear_order(b)}, r) ==
                         Player::Duplicator;
        if (dup != (a >= g_lo(r))) bad.push_back(label);
      }
  std::string stretch;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (ms(ctx, "l.o.(10) vs l.o.(11) r=4", {make_linear_order(10)}, {make_linear_order(11)}, 4) !=
        Player::Duplicator)
      bad.push_back("r=4 (10,11) should be Duplicator");
    if (ms(ctx, "l.o.(9) vs l.o.(10) r=4", {make_linear_order(9)}, {make_linear_order(10)}, 4) !=
        Player::Spoiler)
      bad.push_back("r=4 (9,10) should be Spoiler");
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s > 600) stretch = "r=4 pair exceeded its 10-minute gate (stretch test)";
  } catch (const ResourceLimit& e) {
    stretch = "r=4 pair tripped budget '" + e.budget() + "' (downgraded to stretch test)";
  }
  std::string d = std::to_string(games) + " games r <= 3 a < b <= 6; r=4: (10,11) Duplicator, "
                  "(9,10) Spoiler";
  if (!stretch.empty()) d += "; " + stretch;
  if (!bad.empty()) d += "; wrong: " + join(bad, ", ");
  return {bad.empty(), d};
}

Outcome edges_vs_path(Context& ctx) {
  const Structure a = two_disjoint_edges(), b = three_edge_path();
  std::vector<std::string> bad;
  if (solve_ef(a, b, 2).winner != Player::Spoiler) bad.push_back("E-F r=2 is not Spoiler");
  if (ms(ctx, "edges-vs-path r=2", {a}, {b}, 2) != Player::Duplicator)
    bad.push_back("M-S r=2 is not Duplicator");
  if (ms(ctx, "edges-vs-path r=3", {a}, {b}, 3) != Player::Spoiler) bad.push_back("M-S r=3 is not Spoiler");
  const Formula sep = extract_separating_sentence(Set{b}, Set{a}, 3);
  const Formula sigma = parse("(exists x (and (exists y (E x y)) (exists y (E y x))))",
                              Vocabulary::graph());
  const CompiledFormula cs(sep, Vocabulary::graph()), cg(sigma, Vocabulary::graph());
  std::size_t checked = 0, differ = 0;
  for (std::size_t n = 0; n <= 3; ++n)
    for_each_labeled_structure(Vocabulary::graph(), n, [&](const Structure& s) {
      ++checked;
      if (cs.run(s) != cg.run(s)) ++differ;
    });
  if (quants(sep) > 3) bad.push_back("separator has " + std::to_string(quants(sep)) + " quantifiers");
  if (differ) bad.push_back("separator differs from the in/out-edge sentence on " +
                            std::to_string(differ) + " digraphs");
  return {bad.empty(), "E-F r=2 Spoiler, M-S r=2 Duplicator, M-S r=3 Spoiler; separator with " +
                           std::to_string(quants(sep)) + " quantifiers equivalent on " +
                           std::to_string(checked) + " digraphs with <= 3 nodes" +
                           (bad.empty() ? "" : "; " + join(bad))};
}

Outcome two_branch(Context& ctx) {
  const Structure big = make_tree(two_branch_tree(10, 9)), small = make_tree(two_branch_tree(9, 9));
  const auto start = std::chrono::steady_clock::now();
  std::optional<Player> w;
  std::string trip;
  try {
    w = ms(ctx, "two-branch r=4", {big}, {small}, 4);
  } catch (const ResourceLimit& e) {
    trip = e.budget();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const Structure t54 = make_tree(two_branch_tree(5, 4)), t44 = make_tree(two_branch_tree(4, 4));
  const Player fallback = ms(ctx, "two-branch (5,4) vs (4,4) r=3", {t54}, {t44}, 3);
  const std::string fb = std::string("fallback instance (5,4) vs (4,4) r=3 reports ") +
                         to_string(fallback);
  if (w && s <= 600)
    return {*w == Player::Duplicator,
            "two_branch_tree(10,9) vs (9,9) r=4: " + to_string(*w) + "; " + fb + " (not triggered)"};
  const std::string why = trip.empty() ? "10-minute gate exceeded" : "budget '" + trip + "' tripped";
  return {fallback == Player::Duplicator, why + "; " + fb};
}

Outcome constructive(Context& ctx) {
  std::size_t spoiler = 0, duplicator = 0, skipped = 0;
  std::vector<std::string> bad;
  for (const Instance& in : ctx.instances) {
    if (in.winner == Player::Spoiler) {
      ++spoiler;
      const Formula f = extract_separating_sentence(in.a, in.b, in.r);
      bool ok = quants(f) <= in.r;
      for (const Structure& s : in.a) ok = ok && evaluate(s, f);
      for (const Structure& s : in.b) ok = ok && !evaluate(s, f);
      if (!ok) bad.push_back("extracted sentence fails on " + in.label);
      continue;
    }
    bool small = in.r <= 2;
    for (const Set* side : {&in.a, &in.b})
      for (const Structure& s : *side) small = small && s.size() <= 3;
    if (!small) {
      ++skipped;
      continue;
    }
    ++duplicator;
    if (find_prenex_separator(in.a, in.b, in.r)) bad.push_back("a separator exists for " + in.label);
  }
  return {bad.empty(), std::to_string(spoiler) + " Spoiler instances separated by their extracted "
                       "sentences; " + std::to_string(duplicator) +
                       " small Duplicator instances have no prenex separator (" +
                       std::to_string(skipped) + " larger Duplicator instances not enumerated)" +
                       (bad.empty() ? "" : "; " + join(bad))};
}

// ------------------------------------------------------------- generators

struct DepthCheck {
  std::size_t checked = 0, wrong = 0;
  std::string first;
  void run(const CompiledFormula& f, const TreeSpec& t, std::size_t threshold) {
    ++checked;
    const bool expect = tree_depth(t) >= threshold;
    if (f.run(make_tree(t)) != expect) {
      if (!wrong++)
        first = tree_text(t) + " (depth " + std::to_string(tree_depth(t)) + ") gives " +
                (expect ? "false" : "true");
    }
  }
  std::string text(const std::string& what) const {
    return what + ": " + std::to_string(wrong) + "/" + std::to_string(checked) + " wrong" +
           (wrong ? " e.g. " + first : "");
  }
};

Outcome trees(Context&) {
  const Vocabulary order = Vocabulary::order();
  std::vector<std::string> parts;
  bool pass = true;
  auto threshold = [](const GeneratedSentence& g) {
    return g.threshold ? static_cast<std::size_t>(*g.threshold) : 0;
  };
  const auto g3 = gen_tree_sentence(3), g4 = gen_tree_sentence(4), g5 = gen_tree_sentence(5);
  if (threshold(g3) != 4 || threshold(g4) != 8 || threshold(g5) != 16) {
    pass = false;
    parts.push_back("unexpected thresholds");
  }
  const CompiledFormula f3(g3.formula, order), f4(g4.formula, order), f5(g5.formula, order);
  DepthCheck c3, c4all, c4two, c5;
  for (std::size_t n = 1; n <= 9; ++n)
    for (const TreeSpec& t : enumerate_rooted_trees(n)) {
      if (n <= 8) c3.run(f3, t, 4);
      c4all.run(f4, t, 8);
    }
  for (std::size_t a = 1; a <= 12; ++a)
    for (std::size_t b = 1; b <= a; ++b) c4two.run(f4, two_branch_tree(a, b), 8);
  for (std::size_t n = 1; n <= 20; ++n) c5.run(f5, TreeSpec::path(n), 16);
  for (std::size_t a = 1; a <= 20; ++a)
    for (std::size_t b = 1; b <= a; ++b) c5.run(f5, two_branch_tree(a, b), 16);
  for (const DepthCheck* c : {&c3, &c4all, &c4two, &c5}) pass = pass && c->wrong == 0;
  parts.push_back(c3.text("r=3 all trees <= 8 nodes"));
  parts.push_back(c4all.text("r=4 all trees <= 9 nodes"));
  parts.push_back(c4two.text("r=4 two-branch a,b <= 12"));
  parts.push_back(c5.text("r=5 paths <= 20 and two-branch depth <= 20 (sampled)"));
  return {pass, join(parts)};
}

Outcome stcon(Context&) {
  const auto l2 = gen_stcon_log2(1), l3 = gen_stcon_log3(2), l3b = gen_stcon_log3(3);
  std::vector<std::string> bad;
  if (quants(l2.formula) != 3 || quants(l3.formula) != 5 || quants(l3b.formula) != 8)
    bad.push_back("quantifier counts " + std::to_string(quants(l2.formula)) + "," +
                  std::to_string(quants(l3.formula)) + "," + std::to_string(quants(l3b.formula)));
  const Vocabulary v = Vocabulary::graph_st();
  const CompiledFormula c2(l2.formula, v), c3(l3.formula, v), c3b(l3b.formula, v);
  std::size_t graphs = 0, wrong2 = 0, wrong3 = 0;
  for (std::size_t n = 1; n <= 5; ++n)
    for (bool same : {true, false})
      for_each_st_graph(n, true, same, [&](const Structure& s) {
        ++graphs;
        const auto d = st_distance(s);
        if (c2.run(s) != (d && *d <= 4)) ++wrong2;
        if (c3.run(s) != (d && *d <= 9)) ++wrong3;
      });
  std::size_t wrong_paths = 0;
  for (std::size_t len = 0; len <= 30; ++len)
    if (c3b.run(directed_path(len)) != (len <= 27)) ++wrong_paths;
  if (wrong2) bad.push_back(std::to_string(wrong2) + " log2(1) mismatches");
  if (wrong3) bad.push_back(std::to_string(wrong3) + " log3(2) mismatches");
  if (wrong_paths) bad.push_back(std::to_string(wrong_paths) + " log3(3) path mismatches");
  return {bad.empty(), "quantifiers 3, 5, 8; " + std::to_string(graphs) +
                           " digraphs with <= 5 nodes (loops allowed, one per isomorphism class "
                           "fixing s and t) agree with BFS; paths of length 0..30 agree" +
                           (bad.empty() ? "" : "; " + join(bad))};
}

Outcome theorem31(Context&) {
  std::vector<std::string> bad;
  const auto g = gen_theorem31(3);
  const std::size_t f2 = enumerate_structures_up_to_iso(Vocabulary::graph(), 2).size();
  if (qrank(g.formula) != 3) bad.push_back("qr " + std::to_string(qrank(g.formula)));
  if (quants(g.formula) != 3 * f2) bad.push_back("quants " + std::to_string(quants(g.formula)));
  const Structure a = rank_count_structure(3);
  const CompiledFormula c(g.formula, Vocabulary::graph());
  if (!c.run(a)) bad.push_back("A does not satisfy the sentence");
  std::size_t sat_b = 0;
  for (Element p = 0; p < a.size(); ++p)
    if (c.run(delete_element(a, p))) ++sat_b;
  if (sat_b) bad.push_back(std::to_string(sat_b) + " B_p satisfy the sentence");

  std::mt19937_64 rng(31);
  const std::size_t playouts = 200;
  std::size_t broken = 0;
  std::string witness;
  for (std::size_t i = 0; i < playouts; ++i) {
    HarmonyGame game(a);
    const std::size_t rounds = 1 + rng() % 5;
    for (std::size_t round = 0; round < rounds; ++round) {
      const bool on_a = rng() % 2 == 0;
      std::vector<Element> choices;
      const auto& copies = on_a ? game.a_copies() : game.b_copies();
      for (const HarmonyCopy& copy : copies) {
        Element e;
        do e = static_cast<Element>(rng() % a.size());
        while (copy.deleted && e == *copy.deleted);
        choices.push_back(e);
      }
      if (on_a) game.spoiler_moves_a(choices);
      else game.spoiler_moves_b(choices);
      std::string why;
      if (!game.property_star(&why)) {
        if (!broken++) witness = why;
        break;
      }
    }
  }
  if (broken)
    bad.push_back("Property * fails in " + std::to_string(broken) + "/" +
                  std::to_string(playouts) + " random play-outs, e.g. " + witness);
  return {bad.empty(), "qr 3, quants " + std::to_string(quants(g.formula)) + " = 3*" +
                           std::to_string(f2) + "; A satisfies it, all " +
                           std::to_string(a.size()) + " B_p falsify it" +
                           (bad.empty() ? "; Property * held in every play-out" : "; " + join(bad))};
}

struct Criterion {
  const char* suite;
  const char* name;
  double limit;  // seconds, 0 = none
  Outcome (*run)(Context&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {"tables", "growth table r <= 10", 1, table_reproduction},
      {"tables", "closed forms equal recurrences r <= 40", 1, closed_form_recurrence},
      {"measures", "bound-variable minimization", 300, prop_1_1},
      {"games", "E-F linear-order thresholds", 30, ef_thresholds},
      {"games", "M-S linear-order thresholds", 660, ms_thresholds},
      {"games", "disjoint edges versus a path", 10, edges_vs_path},
      {"games", "two-branch trees (10,9) versus (9,9)", 600, two_branch},
      {"games", "extracted separators and exhaustive non-separation", 0, constructive},
      {"generators", "tree sentences", 300, trees},
      {"generators", "STCON sentences against BFS", 600, stcon},
      {"generators", "rank-versus-count sentence and harmony", 120, theorem31},
  };
  return all;
}

}  // namespace

std::vector<std::string> suite_names() { return {"measures", "games", "generators", "tables", "all"}; }

std::vector<CriterionResult> run_suite(const std::string& suite,
                                       const std::function<void(const CriterionResult&)>& report) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw InvalidArgument("unknown suite '" + suite + "'");
  Context ctx;
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (suite != "all" && suite != c.suite) continue;
    CriterionResult r{c.suite, c.name, false, 0, c.limit, ""};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run(ctx);
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && r.seconds > c.limit) {
      r.pass = false;
      r.detail += "; exceeded the time limit";
    }
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char time[64];
  if (r.limit > 0)
    std::snprintf(time, sizeof time, "%.2f s / %.0f s", r.seconds, r.limit);
  else
    std::snprintf(time, sizeof time, "%.2f s", r.seconds);
  return std::string(r.pass ? "PASS" : "FAIL") + " [" + r.suite + "] " + r.name + " (" + time +
         "): " + r.detail;
}

}  // namespace qgames
