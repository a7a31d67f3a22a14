#pragma once
// Terms of the slanted language, inequalities, and first-order conditions over prec.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "subkit/lattice.hpp"

namespace subkit {

enum class Op { Var, Bot, Top, And, Or, Imp, CoImp, Neg, Sim };

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string name; // Var only
  Term l, r;        // binary: both; unary: l
};

Term var(const std::string& name);
Term bot();
Term top();
Term mk_and(Term a, Term b);
Term mk_or(Term a, Term b);
Term mk_imp(Term a, Term b);
Term mk_coimp(Term a, Term b);
Term mk_neg(Term a);
Term mk_sim(Term a);

bool is_binary(Op op);
bool is_slanted(Op op); // Imp, CoImp, Neg, Sim
bool has_slanted(const Term& t);
bool term_eq(const Term& a, const Term& b);
int term_depth(const Term& t);
void collect_vars(const Term& t, std::vector<std::string>& out); // first-occurrence order, no dups
int count_var(const Term& t, const std::string& v);
Term substitute(const Term& t, const std::string& v, const Term& by);
Term rename(const Term& t, const std::string& from, const std::string& to);
std::string print_term(const Term& t);

struct Inequality {
  Term lhs, rhs;
};
std::string print_inequality(const Inequality& q);
std::vector<std::string> inequality_vars(const Inequality& q);

enum class Rel { Leq, Prec };

struct Atom {
  Rel rel;
  Term lhs, rhs;
};
bool atom_eq(const Atom& a, const Atom& b);
std::string print_atom(const Atom& a);

// Restrictors of restricted quantifiers; `by` is the restricting term x.
//   Prec   (y prec x)        Succ   (x prec y)
//   Leq    (y <= x)          Geq    (x <= y)
//   LeqOr  (x <= y1 \/ y2)   LeqAnd (y1 /\ y2 <= x)
//   LeqCoimp (y2 prec y1 \/ x)   GeqImp (x /\ y1 prec y2)
enum class Restr { None, Prec, Succ, Leq, Geq, LeqOr, LeqAnd, LeqCoimp, GeqImp };

int restr_arity(Restr r); // bound variables a restrictor takes (0 for None)

struct Quant {
  bool exists = false;
  std::vector<std::string> vars;
  Restr restr = Restr::None;
  Term by; // set iff restr != None
};

// The atom a restricted quantifier contributes (guard for forall, conjunct for exists).
Atom restrictor_atom(const Quant& q);

// prefix . [antecedent ==>] inner . consequent
// Without an implication the body lives in `consequent` and `antecedent` is empty.
struct Condition {
  std::vector<Quant> prefix;
  bool implication = false;
  std::vector<Atom> antecedent;
  std::vector<Quant> inner;
  std::vector<Atom> consequent;
};

std::string print_condition(const Condition& c);
// Variables not bound by any quantifier, in first-occurrence order.
std::vector<std::string> free_vars(const Condition& c);
// Makes the universal closure explicit: free variables become a leading forall prefix.
Condition close_universally(const Condition& c);
bool condition_eq(const Condition& a, const Condition& b);

} // namespace subkit
