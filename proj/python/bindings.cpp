// Python bindings: structures, formulas, solvers, generators, growth
// functions and an in-process handle on the HTTP service's router.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qgames/errors.hpp"
#include "qgames/formula.hpp"
#include "qgames/game.hpp"
#include "qgames/generators.hpp"
#include "qgames/growth.hpp"
#include "qgames/io.hpp"
#include "qgames/service.hpp"

namespace py = pybind11;
using namespace qgames;

namespace {

// Formula is a shared_ptr, which pybind11 would take for a holder type;
// a thin value wrapper keeps it an ordinary Python class.
struct PyFormula {
  Formula f;
};

py::object to_py(const BigInt& v) { return py::module_::import("builtins").attr("int")(v.str()); }

Vocabulary vocab_by_name(const std::string& name) {
  if (name == "order") return Vocabulary::order();
  if (name == "graph") return Vocabulary::graph();
  if (name == "graph-st") return Vocabulary::graph_st();
  throw InvalidArgument("vocabulary must be order, graph or graph-st");
}

FirstMove first_move(const std::string& s) {
  if (s.empty()) return FirstMove::Any;
  if (s == "a") return FirstMove::A;
  if (s == "b") return FirstMove::B;
  throw InvalidArgument("first_move must be '', 'a' or 'b'");
}

py::dict outcome(const GameOutcome& o) {
  py::dict d;
  d["winner"] = to_string(o.winner);
  if (o.witness) {
    d["side"] = to_string(o.witness->side);
    d["choices"] = o.witness->choices;
  } else {
    d["side"] = py::none();
    d["choices"] = py::none();
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(qgames, m) {
  m.doc() = "Ehrenfeucht-Fraisse and multi-structural games on finite structures";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<NoSeparator>(m, "NoSeparator", PyExc_RuntimeError);
  // ResourceLimit carries the budget name in its message.
  static py::object resource_limit = py::exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ResourceLimit& e) {
      py::set_error(resource_limit, (e.budget() + ": " + e.what()).c_str());
    }
  });

  py::class_<Structure>(m, "Structure")
      .def_property_readonly("size", &Structure::size)
      .def("to_json", [](const Structure& s) { return structure_to_json(s).dump(); })
      .def_static("from_json",
                  [](const std::string& text) { return structure_from_json(nlohmann::json::parse(text)); })
      .def("__eq__", [](const Structure& a, const Structure& b) { return a == b; })
      .def("__repr__", [](const Structure& s) {
        return "<Structure size=" + std::to_string(s.size()) + ">";
      });

  m.def("linear_order", &make_linear_order, py::arg("size"));
  m.def("tree", [](const std::vector<long>& parents) {
    std::vector<std::size_t> p;
    for (long x : parents) p.push_back(x < 0 ? TreeSpec::kRoot : static_cast<std::size_t>(x));
    return make_tree(TreeSpec(p));
  }, py::arg("parents"), "Tree order from a parent list; -1 marks the root.");
  m.def("two_branch_tree", [](std::size_t a, std::size_t b) { return make_tree(two_branch_tree(a, b)); },
        py::arg("len1"), py::arg("len2"));
  m.def("directed_path", &directed_path, py::arg("length"));
  m.def("two_disjoint_edges", &two_disjoint_edges);
  m.def("three_edge_path", &three_edge_path);
  m.def("preset", &structure_preset, py::arg("name"));

  py::class_<PyFormula>(m, "Formula")
      .def("__str__", [](const PyFormula& f) { return print(f.f); })
      .def("__repr__", [](const PyFormula& f) { return "<Formula " + print(f.f) + ">"; })
      .def_property_readonly("quants", [](const PyFormula& f) { return quants(f.f); })
      .def_property_readonly("rank", [](const PyFormula& f) { return qrank(f.f); })
      .def_property_readonly("bound_vars", [](const PyFormula& f) { return bound_var_count(f.f); })
      .def_property_readonly("prenex_signature",
                             [](const PyFormula& f) { return prenex_signature(f.f); })
      .def("minimize_bound_vars",
           [](const PyFormula& f) { return PyFormula{minimize_bound_vars(f.f)}; });

  m.def("parse", [](const std::string& text, const std::string& vocab) {
    return PyFormula{parse(text, vocab_by_name(vocab))};
  }, py::arg("text"), py::arg("vocab") = "graph");
  m.def("evaluate", [](const Structure& s, const std::string& text) {
    return evaluate(s, parse(text, s.vocabulary()));
  }, py::arg("structure"), py::arg("formula"));
  m.def("evaluate", [](const Structure& s, const PyFormula& f) { return evaluate(s, f.f); },
        py::arg("structure"), py::arg("formula"));

  m.def("solve_ef", [](const Structure& a, const Structure& b, std::size_t r) {
    return outcome(solve_ef(a, b, r));
  }, py::arg("a"), py::arg("b"), py::arg("rounds"));
  m.def("solve_ms", [](const std::vector<Structure>& a, const std::vector<Structure>& b,
                       std::size_t r, const std::string& first, std::size_t max_classes) {
    MsOptions o;
    o.first_move = first_move(first);
    o.max_classes = max_classes;
    return outcome(solve_ms(a, b, r, o));
  }, py::arg("a"), py::arg("b"), py::arg("rounds"), py::arg("first_move") = "",
        py::arg("max_classes") = 5000);
  m.def("separating_sentence", [](const std::vector<Structure>& a, const std::vector<Structure>& b,
                                  std::size_t r) {
    return PyFormula{extract_separating_sentence(a, b, r)};
  },
        py::arg("a"), py::arg("b"), py::arg("rounds"));

  m.def("generate", [](const std::string& family, std::size_t param) {
    const GeneratedSentence g = generate(family, param);
    py::dict d;
    d["formula"] = PyFormula{g.formula};
    d["quants"] = quants(g.formula);
    d["rank"] = qrank(g.formula);
    d["threshold"] = g.threshold ? to_py(*g.threshold) : py::none();
    return d;
  }, py::arg("family"), py::arg("param"));
  m.def("family_names", &family_names);

  m.def("f", [](std::size_t r) { return to_py(f_lo(r)); }, py::arg("r"));
  m.def("g", [](std::size_t r) { return to_py(g_lo(r)); }, py::arg("r"));
  m.def("t", [](std::size_t r) { return to_py(t_tree(r)); }, py::arg("r"));
  m.def("g_forall", [](std::size_t r) { return to_py(g_forall(r)); }, py::arg("r"));
  m.def("g_exists", [](std::size_t r) { return to_py(g_exists(r)); }, py::arg("r"));
  m.def("growth_table", [](std::size_t max_r) {
    py::list rows;
    for (const GrowthRow& row : growth_table(max_r)) {
      py::dict d;
      d["r"] = row.r;
      d["f"] = to_py(row.f);
      d["g"] = to_py(row.g);
      d["t"] = to_py(row.t);
      rows.append(d);
    }
    return rows;
  }, py::arg("max_r"));

  py::class_<GameService>(m, "Service", "The HTTP service's request router, without a socket.")
      .def(py::init<>())
      .def("handle", [](GameService& s, const std::string& method, const std::string& path,
                        const std::map<std::string, std::string>& query, const std::string& body) {
        const HttpResponse r = s.handle(method, path, query, body);
        return py::make_tuple(r.status, r.body.dump());
      }, py::arg("method"), py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
         py::arg("body") = "");
}
