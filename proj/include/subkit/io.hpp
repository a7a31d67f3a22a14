#pragma once
// JSON formats for posets, lattice elements, models and regression suites.

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "subkit/subord.hpp"

namespace subkit {

using json = nlohmann::json;

json read_json_file(const std::string& path); // throws Error on I/O or syntax errors

Poset poset_from_json(const json& j); // {"elements": [...], "leq": [[x, y], ...]}
json poset_to_json(const Poset& p);

// Elements are sorted lists of irreducible names; input also accepts "bot", "top" or a single name.
Elem elem_from_json(const Lattice& l, const json& j);
json elem_to_json(const Lattice& l, Elem x);

json relation_to_json(const Lattice& l, const Relation& r); // list of pairs, row-major
Relation relation_from_json(const Lattice& l, const json& j);

// {"poset": {...}, "subordination": [[x, y], ...], "closed": bool}; closed:false applies closure.
struct ModelSpec {
  LatticePtr lattice;
  Relation seed;
  bool closed = false;
};
ModelSpec model_spec_from_json(const json& j);
// Throws Error when closed:true and the relation is not a subordination relation.
Model build_model(const ModelSpec& spec);

struct SuiteEntry {
  std::string name, ineq, cond;
};
std::vector<SuiteEntry> suite_from_json(const json& j);

} // namespace subkit
