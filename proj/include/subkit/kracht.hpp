#pragma once
// Kracht-shaped conditions: role inference, shape validation, and inversion to an inequality.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subkit/correspond.hpp"
#include "subkit/term.hpp"

namespace subkit {

enum class Role { V, A, B, C, D };
char role_char(Role r); // 'v', 'a', 'b', 'c', 'd'
using RoleMap = std::map<std::string, Role>;
// "x=a,y=v": roles for universal variables; throws Error on bad syntax.
RoleMap parse_roles(const std::string& spec);

struct Restrictor {
  bool exists = false;            // restricts d-variables (consequent) or c-variables (antecedent)
  std::vector<std::string> vars;  // restricted variables
  Restr kind = Restr::None;
  Term by;                        // restricting term
  bool from_quantifier = false;   // written as a restricted quantifier rather than an atom
};
Atom restrictor_atom(const Restrictor& r);

struct KrachtFormula {
  std::vector<std::string> univ; // universal variables in prefix order
  std::vector<std::string> exist;
  RoleMap roles;
  std::vector<Restrictor> restrictors;
  std::vector<Atom> eta, zeta;
};
std::string print_kracht(const KrachtFormula& k);

struct ShapeViolation {
  int clause; // 1..9 for the numbered shape clauses, 0 for the overall quantifier layout
  std::string witness;
};

struct ShapeReport {
  bool valid = false;
  KrachtFormula formula; // best role assignment found (the valid one when valid)
  std::vector<ShapeViolation> violations;
  std::vector<std::string> notes; // extensions of the shape that were used
};

// Searches role assignments (fewest non-v variables first) unless `roles` fixes them.
ShapeReport validate_shape(const Condition& c, const std::optional<RoleMap>& roles = {});

struct InvertError : Error {
  using Error::Error;
};

struct InvertResult {
  Inequality ineq;
  std::vector<TraceStep> trace;
};
// Throws InvertError when a step has no displayable side.
InvertResult invert(const KrachtFormula& k);

} // namespace subkit
