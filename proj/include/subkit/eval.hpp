#pragma once
// Evaluation of terms, inequalities and conditions over finite subordination algebras.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subkit/subord.hpp"
#include "subkit/term.hpp"

namespace subkit {

using Assignment = std::map<std::string, Elem>;

struct EvalOptions {
  int depth_limit = 8;
};

Elem eval_term(const Model& m, const Assignment& env, const Term& t);
bool eval_atom(const Model& m, const Assignment& env, const Atom& a);

struct IneqResult {
  bool holds = true;
  Assignment witness; // falsifying assignment when !holds
  Elem lhs = 0, rhs = 0;
};
IneqResult eval_inequality(const Model& m, const Inequality& q);

struct CondResult {
  bool holds = true;
  Assignment witness; // universally bound values at the failing point when !holds
};

// Bound variables below the leading universal block; free variables count as part of that block.
int quantifier_depth(const Condition& c);
// Throws LimitError when the depth limit is exceeded.
CondResult eval_condition(const Model& m, const Condition& c, const EvalOptions& opt = {});

} // namespace subkit
