// qgames: command-line driver for formulas, games, generators, growth
// tables, the acceptance suites and the game service.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error,
// 3 resource limit.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgames/acceptance.hpp"
#include "qgames/errors.hpp"
#include "qgames/formula.hpp"
#include "qgames/game.hpp"
#include "qgames/generators.hpp"
#include "qgames/growth.hpp"
#include "qgames/io.hpp"
#include "qgames/service.hpp"

using namespace qgames;
using nlohmann::json;

namespace {

struct Budgets {
  std::size_t max_classes = 5000;
  std::size_t max_memo = 1'000'000;
  std::size_t max_canon = 12;

  MsOptions ms() const {
    MsOptions o;
    o.max_classes = max_classes;
    o.max_memo = max_memo;
    o.canon.max_elements = max_canon;
    return o;
  }
};

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A formula given in a file or inline, parsed against `vocab`, or against
// the first of {<}, {E}, {E; s, t} that accepts it.
Formula load_formula(const std::string& file, const std::string& inline_text,
                     const Vocabulary* vocab, Vocabulary* used = nullptr) {
  if (file.empty() == inline_text.empty())
    throw CLI::ValidationError("give exactly one of --formula and --inline");
  const std::string text = file.empty() ? inline_text : read_text(file);
  if (vocab) {
    if (used) *used = *vocab;
    return parse(text, *vocab);
  }
  std::string first_error;
  for (const Vocabulary& v : {Vocabulary::order(), Vocabulary::graph(), Vocabulary::graph_st()}) {
    try {
      Formula f = parse(text, v);
      if (used) *used = v;
      return f;
    } catch (const std::exception& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  throw InvalidArgument(first_error);
}

std::string side_text(Side s) { return s == Side::A ? "a" : "b"; }

std::string choices_text(const std::vector<Element>& c) {
  std::string s;
  for (Element e : c) s += (s.empty() ? "" : " ") + std::to_string(e);
  return s;
}

std::string big_text(const std::optional<BigInt>& v) { return v ? v->str() : "none"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantifier-count games: formulas, Ehrenfeucht-Fraisse and multi-structural "
               "games, sentence generators"};
  app.require_subcommand(1);
  app.fallthrough();
  Budgets budgets;
  std::string format = "text";
  app.add_option("--max-classes", budgets.max_classes, "Class cap per side (QGAMES_BUDGET_CLASSES)")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-memo", budgets.max_memo, "Memoized solver states")->check(CLI::PositiveNumber);
  app.add_option("--max-canon", budgets.max_canon, "Largest structure that is canonicalized")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a sentence on a structure");
  std::string structure_file, formula_file, inline_formula;
  eval_cmd->add_option("--structure", structure_file, "Structure JSON file")->required();
  eval_cmd->add_option("--formula", formula_file, "Formula file (S-expression)");
  eval_cmd->add_option("--inline", inline_formula, "Formula text");

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Quantifier count, rank and variables");
  std::string vocab_name = "auto";
  measure_cmd->add_option("--formula", formula_file, "Formula file (S-expression)");
  measure_cmd->add_option("--inline", inline_formula, "Formula text");
  measure_cmd->add_option("--vocab", vocab_name, "Vocabulary")
      ->check(CLI::IsMember({"auto", "order", "graph", "graph-st"}));

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Print a generated sentence and its threshold");
  std::string family;
  std::size_t param = 0;
  gen_cmd->add_option("--family", family, "Sentence family")
      ->required()
      ->check(CLI::IsMember(family_names()));
  gen_cmd->add_option("--param", param, "Family parameter")->required();

  // solve-ef
  auto* ef_cmd = app.add_subcommand("solve-ef", "Solve an r-round E-F game");
  std::string a_file, b_file;
  std::size_t rounds = 0;
  ef_cmd->add_option("--a", a_file, "Structure A")->required();
  ef_cmd->add_option("--b", b_file, "Structure B")->required();
  ef_cmd->add_option("--rounds", rounds, "Rounds")->required();

  // solve-ms
  auto* ms_cmd = app.add_subcommand("solve-ms", "Solve an r-round multi-structural game");
  std::vector<std::string> a_files, b_files;
  std::string first_move;
  bool emit_separator = false;
  ms_cmd->add_option("--a", a_files, "Structures of side A")->required();
  ms_cmd->add_option("--b", b_files, "Structures of side B")->required();
  ms_cmd->add_option("--rounds", rounds, "Rounds")->required();
  ms_cmd->add_option("--first-move", first_move, "Side of Spoiler's first move")
      ->check(CLI::IsMember({"a", "b"}));
  ms_cmd->add_flag("--emit-separator", emit_separator, "Print a separating sentence");

  // table
  auto* table_cmd = app.add_subcommand("table", "Growth functions by round count");
  std::size_t max_r = 10;
  table_cmd->add_option("--max-r", max_r, "Largest r")->check(CLI::Range(2, 1000));

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run acceptance suites");
  std::string suite = "all";
  verify_cmd->add_option("--suite", suite, "Suite")->check(CLI::IsMember(suite_names()));

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP game service");
  int port = 8080;
  std::string host = "127.0.0.1", persist;
  serve_cmd->add_option("--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--persist", persist, "Directory for session move logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (const char* env = std::getenv("QGAMES_BUDGET_CLASSES"); env && app.count("--max-classes") == 0) {
    try {
      budgets.max_classes = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "qgames: QGAMES_BUDGET_CLASSES must be a positive integer\n";
      return 2;
    }
    if (budgets.max_classes == 0) {
      std::cerr << "qgames: QGAMES_BUDGET_CLASSES must be a positive integer\n";
      return 2;
    }
  }

  try {
    if (*eval_cmd) {
      const Structure s = read_structure_file(structure_file);
      const Vocabulary& v = s.vocabulary();
      const Formula f = load_formula(formula_file, inline_formula, &v);
      const bool value = evaluate(s, f);
      if (format == "json") std::cout << json{{"value", value}}.dump() << "\n";
      else std::cout << (value ? "true" : "false") << "\n";
    } else if (*measure_cmd) {
      std::optional<Vocabulary> vocab;
      if (vocab_name == "order") vocab = Vocabulary::order();
      if (vocab_name == "graph") vocab = Vocabulary::graph();
      if (vocab_name == "graph-st") vocab = Vocabulary::graph_st();
      const Formula f = load_formula(formula_file, inline_formula, vocab ? &*vocab : nullptr);
      const auto sig = prenex_signature(f);
      if (format == "json") {
        std::cout << json{{"quants", quants(f)},
                          {"rank", qrank(f)},
                          {"boundVars", bound_var_count(f)},
                          {"prenex", sig ? json(*sig) : json()},
                          {"sentence", is_sentence(f)}}
                         .dump()
                  << "\n";
      } else if (format == "csv") {
        std::cout << "quants,rank,bound_vars,prenex,sentence\n"
                  << quants(f) << "," << qrank(f) << "," << bound_var_count(f) << ","
                  << (sig ? *sig : "") << "," << (is_sentence(f) ? "true" : "false") << "\n";
      } else {
        std::cout << "quantifiers: " << quants(f) << "\n"
                  << "rank: " << qrank(f) << "\n"
                  << "bound variables: " << bound_var_count(f) << "\n"
                  << "prenex signature: " << (sig ? (sig->empty() ? "(none)" : *sig) : "not prenex")
                  << "\n"
                  << "sentence: " << (is_sentence(f) ? "yes" : "no") << "\n";
      }
    } else if (*gen_cmd) {
      const GeneratedSentence g = generate(family, param);
      if (format == "json") {
        std::cout << json{{"family", family},
                          {"param", param},
                          {"formula", print(g.formula)},
                          {"quants", quants(g.formula)},
                          {"rank", qrank(g.formula)},
                          {"threshold", g.threshold ? json(g.threshold->str()) : json()}}
                         .dump()
                  << "\n";
      } else {
        std::cout << print(g.formula) << "\n"
                  << "quantifiers: " << quants(g.formula) << "\n"
                  << "rank: " << qrank(g.formula) << "\n"
                  << "threshold: " << big_text(g.threshold) << "\n";
      }
    } else if (*ef_cmd) {
      const GameOutcome out =
          solve_ef(read_structure_file(a_file), read_structure_file(b_file), rounds, budgets.ms());
      std::cout << "winner: " << to_string(out.winner) << "\n";
      if (out.witness)
        std::cout << "first move: side " << side_text(out.witness->side) << " element "
                  << choices_text(out.witness->choices) << "\n";
    } else if (*ms_cmd) {
      std::vector<Structure> set_a, set_b;
      for (const auto& f : a_files) set_a.push_back(read_structure_file(f));
      for (const auto& f : b_files) set_b.push_back(read_structure_file(f));
      MsOptions opts = budgets.ms();
      if (first_move == "a") opts.first_move = FirstMove::A;
      if (first_move == "b") opts.first_move = FirstMove::B;
      const GameOutcome out = solve_ms(set_a, set_b, rounds, opts);
      std::cout << "winner: " << to_string(out.winner) << "\n";
      if (out.witness)
        std::cout << "first move: side " << side_text(out.witness->side) << " elements "
                  << choices_text(out.witness->choices) << "\n";
      std::cout << "states: " << out.stats.states << "\n";
      if (emit_separator) {
        if (out.winner == Player::Duplicator) {
          std::cout << "separator: none (Duplicator wins)\n";
        } else {
          const Formula f = extract_separating_sentence(set_a, set_b, rounds, opts);
          std::cout << "separator: " << print(f) << "\n"
                    << "separator quantifiers: " << quants(f) << "\n";
        }
      }
    } else if (*table_cmd) {
      const auto rows = growth_table(max_r);
      if (format == "json") {
        json out = json::array();
        for (const auto& row : rows)
          out.push_back({{"r", row.r}, {"f", row.f.str()}, {"g", row.g.str()}, {"t", row.t.str()}});
        std::cout << out.dump() << "\n";
      } else {
        const bool csv = format == "csv";
        std::printf(csv ? "r,f,g,t\n" : "%4s %24s %24s %24s\n", "r", "f", "g", "t");
        for (const auto& row : rows) {
          if (csv)
            std::printf("%zu,%s,%s,%s\n", row.r, row.f.str().c_str(), row.g.str().c_str(),
                        row.t.str().c_str());
          else
            std::printf("%4zu %24s %24s %24s\n", row.r, row.f.str().c_str(), row.g.str().c_str(),
                        row.t.str().c_str());
        }
      }
    } else if (*verify_cmd) {
      std::size_t failed = 0;
      for (const auto& r : run_suite(suite, [](const CriterionResult& r) {
             std::cout << format_result(r) << std::endl;
           }))
        if (!r.pass) ++failed;
      std::cout << failed << " criteria failed\n";
      return failed ? 1 : 0;
    } else if (*serve_cmd) {
      ServiceOptions opts;
      opts.session.solver = budgets.ms();
      opts.session.max_classes = budgets.max_classes;
      if (!persist.empty()) opts.persist_dir = persist;
      GameService service(opts);
      service.listen(host, port, [&](int p) {
        std::cout << "listening on http://" << host << ":" << p << std::endl;
      });
    }
  } catch (const ResourceLimit& e) {
    std::cerr << "qgames: resource limit '" << e.budget() << "': " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "qgames: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "qgames: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "qgames: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qgames: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
