#include "qgames/io.hpp"

#include <fstream>

#include "qgames/errors.hpp"

namespace qgames {

using nlohmann::json;

json vocabulary_to_json(const Vocabulary& v) {
  json rels = json::array();
  for (const auto& r : v.relations()) rels.push_back({{"name", r.name}, {"arity", r.arity}});
  return {{"relations", rels}, {"constants", v.constants()}};
}

Vocabulary vocabulary_from_json(const json& j) {
  try {
    std::vector<RelationSymbol> rels;
    for (const auto& r : j.at("relations"))
      rels.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>()});
    std::vector<std::string> constants;
    if (j.contains("constants")) constants = j.at("constants").get<std::vector<std::string>>();
    return Vocabulary(std::move(rels), std::move(constants));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad vocabulary: ") + e.what());
  }
}

json structure_to_json(const Structure& s) {
  const Vocabulary& v = s.vocabulary();
  json rels = json::object();
  for (std::size_t r = 0; r < v.relations().size(); ++r) rels[v.relations()[r].name] = s.tuples(r);
  json constants = json::object();
  for (std::size_t c = 0; c < v.constants().size(); ++c) constants[v.constants()[c]] = s.constant(c);
  return {{"vocabulary", vocabulary_to_json(v)},
          {"size", s.size()},
          {"relations", rels},
          {"constants", constants}};
}

Structure structure_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("structure must be a JSON object");
  const Vocabulary v = vocabulary_from_json(j.value("vocabulary", json::object()));
  try {
    const auto size = j.at("size").get<std::size_t>();
    std::vector<std::vector<Tuple>> tables(v.relations().size());
    const json rels = j.value("relations", json::object());
    for (const auto& [name, tuples] : rels.items()) {
      const auto idx = v.relation_index(name);
      if (!idx) throw InvalidArgument("relation '" + name + "' is not in the vocabulary");
      tables[*idx] = tuples.get<std::vector<Tuple>>();
    }
    std::vector<Element> constants;
    const json cs = j.value("constants", json::object());
    for (const auto& name : v.constants()) {
      if (!cs.contains(name)) throw InvalidArgument("constant '" + name + "' is not mapped");
      constants.push_back(cs.at(name).get<Element>());
    }
    for (const auto& [name, value] : cs.items())
      if (!v.constant_index(name)) throw InvalidArgument("constant '" + name + "' is not in the vocabulary");
    return Structure(v, size, std::move(tables), std::move(constants));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad structure: ") + e.what());
  }
}

Structure read_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return structure_from_json(j);
}

void write_structure_file(const std::string& path, const Structure& s) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << structure_to_json(s).dump(2) << "\n";
}

}  // namespace qgames
