#include "subkit/io.hpp"

#include <fstream>
#include <sstream>

namespace subkit {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

Poset poset_from_json(const json& j) {
  try {
    std::vector<std::string> names = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> leq;
    if (j.contains("leq"))
      for (const auto& p : j.at("leq")) {
        if (!p.is_array() || p.size() != 2) throw Error("poset leq entries must be pairs");
        leq.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
      }
    return Poset(std::move(names), leq);
  } catch (const json::exception& e) {
    throw Error(std::string("bad poset: ") + e.what());
  }
}

json poset_to_json(const Poset& p) {
  json leq = json::array();
  for (int i = 0; i < p.size(); ++i)
    for (int k = 0; k < p.size(); ++k)
      if (i != k && p.leq(i, k)) leq.push_back({p.names()[i], p.names()[k]});
  return {{"elements", p.names()}, {"leq", leq}};
}

Elem elem_from_json(const Lattice& l, const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "bot") return l.bot();
    if (s == "top") return l.top();
    int i = l.base().index_of(s);
    if (i < 0) throw Error("unknown element '" + s + "'");
    return l.principal(i);
  }
  if (j.is_array()) {
    std::vector<std::string> names;
    for (const auto& x : j) {
      if (!x.is_string()) throw Error("element lists hold irreducible names");
      names.push_back(x.get<std::string>());
    }
    return l.from_members(names);
  }
  throw Error("element must be a name or a list of names");
}

json elem_to_json(const Lattice& l, Elem x) { return l.members(x); }

json relation_to_json(const Lattice& l, const Relation& r) {
  json out = json::array();
  for (const auto& [a, b] : r.pairs()) out.push_back(json::array({elem_to_json(l, a), elem_to_json(l, b)}));
  return out;
}

Relation relation_from_json(const Lattice& l, const json& j) {
  if (!j.is_array()) throw Error("relation must be a list of pairs");
  Relation r(l.size());
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw Error("relation entries must be pairs");
    r.set(elem_from_json(l, p[0]), elem_from_json(l, p[1]));
  }
  return r;
}

ModelSpec model_spec_from_json(const json& j) {
  if (!j.is_object() || !j.contains("poset")) throw Error("model needs a \"poset\" object");
  ModelSpec m;
  m.lattice = std::make_shared<const Lattice>(poset_from_json(j.at("poset")));
  m.seed = j.contains("subordination") ? relation_from_json(*m.lattice, j.at("subordination"))
                                       : Relation(m.lattice->size());
  m.closed = j.value("closed", false);
  return m;
}

Model build_model(const ModelSpec& spec) {
  Relation r = spec.closed ? spec.seed : closure(*spec.lattice, spec.seed);
  return Model(SubordinationRelation(spec.lattice, r));
}

std::vector<SuiteEntry> suite_from_json(const json& j) {
  if (!j.is_array()) throw Error("suite must be a list");
  std::vector<SuiteEntry> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("ineq") || !e.contains("cond"))
      throw Error("suite entries need \"ineq\" and \"cond\"");
    out.push_back({e.value("name", std::string("entry") + std::to_string(out.size())),
                   e.at("ineq").get<std::string>(), e.at("cond").get<std::string>()});
  }
  return out;
}

} // namespace subkit
