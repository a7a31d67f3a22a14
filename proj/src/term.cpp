#include "subkit/term.hpp"

#include <algorithm>

namespace subkit {

namespace {
Term make(Op op, std::string name = {}, Term l = nullptr, Term r = nullptr) {
  return std::make_shared<const Node>(Node{op, std::move(name), std::move(l), std::move(r)});
}
} // namespace

Term var(const std::string& name) { return make(Op::Var, name); }
Term bot() { return make(Op::Bot); }
Term top() { return make(Op::Top); }
Term mk_and(Term a, Term b) { return make(Op::And, {}, std::move(a), std::move(b)); }
Term mk_or(Term a, Term b) { return make(Op::Or, {}, std::move(a), std::move(b)); }
Term mk_imp(Term a, Term b) { return make(Op::Imp, {}, std::move(a), std::move(b)); }
Term mk_coimp(Term a, Term b) { return make(Op::CoImp, {}, std::move(a), std::move(b)); }
Term mk_neg(Term a) { return make(Op::Neg, {}, std::move(a)); }
Term mk_sim(Term a) { return make(Op::Sim, {}, std::move(a)); }

bool is_binary(Op op) {
  return op == Op::And || op == Op::Or || op == Op::Imp || op == Op::CoImp;
}

bool is_slanted(Op op) {
  return op == Op::Imp || op == Op::CoImp || op == Op::Neg || op == Op::Sim;
}

bool has_slanted(const Term& t) {
  if (!t) return false;
  return is_slanted(t->op) || has_slanted(t->l) || has_slanted(t->r);
}

bool term_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->op == b->op && a->name == b->name && term_eq(a->l, b->l) && term_eq(a->r, b->r);
}

int term_depth(const Term& t) {
  if (!t) return 0;
  return 1 + std::max(term_depth(t->l), term_depth(t->r));
}

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (!t) return;
  if (t->op == Op::Var) {
    if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
    return;
  }
  collect_vars(t->l, out);
  collect_vars(t->r, out);
}

int count_var(const Term& t, const std::string& v) {
  if (!t) return 0;
  if (t->op == Op::Var) return t->name == v ? 1 : 0;
  return count_var(t->l, v) + count_var(t->r, v);
}

Term substitute(const Term& t, const std::string& v, const Term& by) {
  if (!t) return t;
  if (t->op == Op::Var) return t->name == v ? by : t;
  Term l = substitute(t->l, v, by), r = substitute(t->r, v, by);
  if (l == t->l && r == t->r) return t;
  return make(t->op, {}, l, r);
}

Term rename(const Term& t, const std::string& from, const std::string& to) {
  return substitute(t, from, var(to));
}

namespace {
// 1: -> >-   2: \/   3: /\   4: neg sim   5: atoms
int level(const Term& t) {
  switch (t->op) {
  case Op::Imp:
  case Op::CoImp: return 1;
  case Op::Or: return 2;
  case Op::And: return 3;
  case Op::Neg:
  case Op::Sim: return 4;
  default: return 5;
  }
}

std::string wrap(const Term& t, bool paren) {
  std::string s = print_term(t);
  return paren ? "(" + s + ")" : s;
}
} // namespace

std::string print_term(const Term& t) {
  switch (t->op) {
  case Op::Var: return t->name;
  case Op::Bot: return "bot";
  case Op::Top: return "top";
  case Op::Neg: return "neg " + wrap(t->l, level(t->l) < 4);
  case Op::Sim: return "sim " + wrap(t->l, level(t->l) < 4);
  case Op::And: return wrap(t->l, level(t->l) < 3) + " /\\ " + wrap(t->r, level(t->r) <= 3);
  case Op::Or: return wrap(t->l, level(t->l) < 2) + " \\/ " + wrap(t->r, level(t->r) <= 2);
  case Op::Imp: return wrap(t->l, level(t->l) <= 1) + " -> " + wrap(t->r, level(t->r) <= 1);
  case Op::CoImp: return wrap(t->l, level(t->l) <= 1) + " >- " + wrap(t->r, level(t->r) <= 1);
  }
  return "?";
}

std::string print_inequality(const Inequality& q) {
  return print_term(q.lhs) + " <= " + print_term(q.rhs);
}

std::vector<std::string> inequality_vars(const Inequality& q) {
  std::vector<std::string> v;
  collect_vars(q.lhs, v);
  collect_vars(q.rhs, v);
  return v;
}

bool atom_eq(const Atom& a, const Atom& b) {
  return a.rel == b.rel && term_eq(a.lhs, b.lhs) && term_eq(a.rhs, b.rhs);
}

std::string print_atom(const Atom& a) {
  return print_term(a.lhs) + (a.rel == Rel::Leq ? " <= " : " prec ") + print_term(a.rhs);
}

int restr_arity(Restr r) {
  switch (r) {
  case Restr::None: return 0;
  case Restr::Prec:
  case Restr::Succ:
  case Restr::Leq:
  case Restr::Geq: return 1;
  default: return 2;
  }
}

Atom restrictor_atom(const Quant& q) {
  const Term& x = q.by;
  auto y = [&](size_t i) { return var(q.vars.at(i)); };
  switch (q.restr) {
  case Restr::Prec: return {Rel::Prec, y(0), x};
  case Restr::Succ: return {Rel::Prec, x, y(0)};
  case Restr::Leq: return {Rel::Leq, y(0), x};
  case Restr::Geq: return {Rel::Leq, x, y(0)};
  case Restr::LeqOr: return {Rel::Leq, x, mk_or(y(0), y(1))};
  case Restr::LeqAnd: return {Rel::Leq, mk_and(y(0), y(1)), x};
  case Restr::LeqCoimp: return {Rel::Prec, y(1), mk_or(y(0), x)};
  case Restr::GeqImp: return {Rel::Prec, mk_and(x, y(0)), y(1)};
  case Restr::None: break;
  }
  throw Error("quantifier has no restrictor");
}

namespace {
std::string print_quant(const Quant& q) {
  std::string kw = q.exists ? "exists " : "forall ";
  switch (q.restr) {
  case Restr::None: return kw + q.vars.at(0) + ".";
  case Restr::Prec: return kw + q.vars.at(0) + " prec " + print_term(q.by) + ".";
  case Restr::Succ: return kw + q.vars.at(0) + " succ " + print_term(q.by) + ".";
  case Restr::Leq: return kw + q.vars.at(0) + " <= " + print_term(q.by) + ".";
  case Restr::Geq: return kw + q.vars.at(0) + " >= " + print_term(q.by) + ".";
  default: break;
  }
  std::string op = q.restr == Restr::LeqOr    ? "<=or"
                   : q.restr == Restr::LeqAnd ? "<=and"
                   : q.restr == Restr::LeqCoimp ? "<=coimp"
                                                : ">=imp";
  return kw + print_term(q.by) + " " + op + " (" + q.vars.at(0) + ", " + q.vars.at(1) + ").";
}

std::string print_conj(const std::vector<Atom>& atoms) {
  if (atoms.empty()) return "top <= top";
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) s += (i ? " & " : "") + print_atom(atoms[i]);
  return s;
}
} // namespace

std::string print_condition(const Condition& c) {
  std::string s;
  for (const auto& q : c.prefix) s += print_quant(q) + " ";
  if (c.implication) s += print_conj(c.antecedent) + " ==> ";
  for (const auto& q : c.inner) s += print_quant(q) + " ";
  s += print_conj(c.consequent);
  return s;
}

std::vector<std::string> free_vars(const Condition& c) {
  std::set<std::string> bound;
  for (const auto* qs : {&c.prefix, &c.inner})
    for (const auto& q : *qs) bound.insert(q.vars.begin(), q.vars.end());
  std::vector<std::string> all;
  for (const auto& q : c.prefix)
    if (q.by) collect_vars(q.by, all);
  for (const auto& a : c.antecedent) {
    collect_vars(a.lhs, all);
    collect_vars(a.rhs, all);
  }
  for (const auto& q : c.inner)
    if (q.by) collect_vars(q.by, all);
  for (const auto& a : c.consequent) {
    collect_vars(a.lhs, all);
    collect_vars(a.rhs, all);
  }
  std::vector<std::string> out;
  for (auto& v : all)
    if (!bound.count(v)) out.push_back(v);
  return out;
}

Condition close_universally(const Condition& c) {
  Condition out = c;
  std::vector<Quant> pre;
  for (const auto& v : free_vars(c)) pre.push_back(Quant{false, {v}, Restr::None, nullptr});
  out.prefix.insert(out.prefix.begin(), pre.begin(), pre.end());
  return out;
}

namespace {
bool quant_eq(const Quant& a, const Quant& b) {
  return a.exists == b.exists && a.vars == b.vars && a.restr == b.restr &&
         (a.restr == Restr::None || term_eq(a.by, b.by));
}
template <class T, class F>
bool list_eq(const std::vector<T>& a, const std::vector<T>& b, F eq) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!eq(a[i], b[i])) return false;
  return true;
}
} // namespace

bool condition_eq(const Condition& a, const Condition& b) {
  return a.implication == b.implication && list_eq(a.prefix, b.prefix, quant_eq) &&
         list_eq(a.inner, b.inner, quant_eq) && list_eq(a.antecedent, b.antecedent, atom_eq) &&
         list_eq(a.consequent, b.consequent, atom_eq);
}

} // namespace subkit
