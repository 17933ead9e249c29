#pragma once

// JSON wire format for structures:
//
//   {"vocabulary": {"relations": [{"name": "E", "arity": 2}], "constants": ["s", "t"]},
//    "size": 4,
//    "relations": {"E": [[0, 1], [1, 2]]},
//    "constants": {"s": 0, "t": 3}}
//
// Tuples are 0-based element lists.  The same document is used for files
// and HTTP payloads.

#include <string>

#include "json.hpp"
#include "qgames/structure.hpp"

namespace qgames {

nlohmann::json vocabulary_to_json(const Vocabulary& v);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

nlohmann::json structure_to_json(const Structure& s);
/// Throws InvalidArgument on a malformed document.
Structure structure_from_json(const nlohmann::json& j);

Structure read_structure_file(const std::string& path);
void write_structure_file(const std::string& path, const Structure& s);

}  // namespace qgames
