#pragma once
// Correspondence: analytic inequalities to first-order conditions on prec.

#include <string>
#include <vector>

#include "subkit/term.hpp"

namespace subkit {

struct TraceStep {
  std::string rule;
  std::string ref; // short description of the law the step uses
  std::string before, after;
};
std::string print_trace_step(const TraceStep& s); // RULE <name> [<ref>] : <before> ==> <after>

// Working form: forall univ. ant ==> exists exist. cons (atoms may still hold slanted terms).
struct Quasi {
  std::vector<std::string> univ;
  std::vector<Atom> ant;
  std::vector<std::string> exist;
  std::vector<Atom> cons;
};
Condition to_condition(const Quasi& q);

struct CorrespondResult {
  Condition condition;
  std::vector<TraceStep> trace;
};

struct CorrespondError : Error {
  CorrespondError(const std::string& msg, std::vector<TraceStep> trace, std::string stuck);
  std::vector<TraceStep> trace; // partial trace of the first attempt
  std::string stuck;            // the quasi-inequality no rule applies to
};

// Throws CorrespondError on non-analytic input or when no rule applies.
CorrespondResult correspond(const Inequality& q);

} // namespace subkit
