#include "subkit/correspond.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "subkit/analytic.hpp"

namespace subkit {

std::string print_trace_step(const TraceStep& s) {
  return "RULE " + s.rule + " [" + s.ref + "] : " + s.before + " ==> " + s.after;
}

CorrespondError::CorrespondError(const std::string& msg, std::vector<TraceStep> t, std::string s)
    : Error(msg), trace(std::move(t)), stuck(std::move(s)) {}

Condition to_condition(const Quasi& q) {
  Condition c;
  for (const auto& v : q.univ) c.prefix.push_back(Quant{false, {v}, Restr::None, nullptr});
  std::vector<Quant> ex;
  for (const auto& v : q.exist) ex.push_back(Quant{true, {v}, Restr::None, nullptr});
  c.implication = !q.ant.empty();
  if (c.implication) {
    c.antecedent = q.ant;
    c.inner = ex;
  } else {
    c.prefix.insert(c.prefix.end(), ex.begin(), ex.end());
  }
  c.consequent = q.cons;
  return c;
}

namespace {

Term expand_negations(const Term& t) {
  if (!t) return t;
  Term l = expand_negations(t->l), r = expand_negations(t->r);
  switch (t->op) {
  case Op::Neg: return mk_imp(l, bot());
  case Op::Sim: return mk_coimp(l, top());
  case Op::And: return l == t->l && r == t->r ? t : mk_and(l, r);
  case Op::Or: return l == t->l && r == t->r ? t : mk_or(l, r);
  case Op::Imp: return l == t->l && r == t->r ? t : mk_imp(l, r);
  case Op::CoImp: return l == t->l && r == t->r ? t : mk_coimp(l, r);
  default: return t;
  }
}

// Unit, zero and idempotence laws of the lattice connectives.
Term simp(const Term& t) {
  if (!t || !is_binary(t->op)) return t;
  Term l = simp(t->l), r = simp(t->r);
  if (t->op == Op::And) {
    if (l->op == Op::Top) return r;
    if (r->op == Op::Top) return l;
    if (l->op == Op::Bot || r->op == Op::Bot) return bot();
    if (term_eq(l, r)) return l;
    return l == t->l && r == t->r ? t : mk_and(l, r);
  }
  if (t->op == Op::Or) {
    if (l->op == Op::Bot) return r;
    if (r->op == Op::Bot) return l;
    if (l->op == Op::Top || r->op == Op::Top) return top();
    if (term_eq(l, r)) return l;
    return l == t->l && r == t->r ? t : mk_or(l, r);
  }
  return l == t->l && r == t->r ? t : (t->op == Op::Imp ? mk_imp(l, r) : mk_coimp(l, r));
}

bool trivially_true(const Atom& a) {
  if (a.rel == Rel::Leq)
    return term_eq(a.lhs, a.rhs) || a.lhs->op == Op::Bot || a.rhs->op == Op::Top;
  return a.lhs->op == Op::Bot || a.rhs->op == Op::Top;
}

bool atom_has_slanted(const Atom& a) { return has_slanted(a.lhs) || has_slanted(a.rhs); }

// Paths (false = left child) to the maximal slanted subterms, left to right.
void maximal_slanted(const Term& t, std::vector<bool>& path, std::vector<std::vector<bool>>& out) {
  if (is_slanted(t->op)) {
    out.push_back(path);
    return;
  }
  if (!is_binary(t->op)) return;
  path.push_back(false);
  maximal_slanted(t->l, path, out);
  path.back() = true;
  maximal_slanted(t->r, path, out);
  path.pop_back();
}

Term at_path(const Term& t, const std::vector<bool>& p, size_t i = 0) {
  if (i == p.size()) return t;
  return at_path(p[i] ? t->r : t->l, p, i + 1);
}

Term replace_at(const Term& t, const std::vector<bool>& p, const Term& by, size_t i = 0) {
  if (i == p.size()) return by;
  Term l = t->l, r = t->r;
  (p[i] ? r : l) = replace_at(p[i] ? t->r : t->l, p, by, i + 1);
  return t->op == Op::And ? mk_and(l, r) : mk_or(l, r);
}

bool mentions_any(const Term& t, const std::vector<std::string>& vs) {
  for (const auto& v : vs)
    if (count_var(t, v) > 0) return true;
  return false;
}

class Engine {
public:
  Engine(Quasi st, std::set<std::string> used) : st_(std::move(st)), used_(std::move(used)) {
    for (const auto& v : st_.univ) used_.insert(v);
  }

  std::vector<TraceStep> trace;

  const Quasi& state() const { return st_; }
  std::string show() const { return print_condition(to_condition(st_)); }

  // Applies rules until none is left; false when stuck with slanted terms remaining.
  bool run() {
    while (simplify() || split() || residuate() || flatten() || ackermann()) {
    }
    for (const auto* as : {&st_.ant, &st_.cons})
      for (const auto& a : *as)
        if (atom_has_slanted(a)) return false;
    return true;
  }

  std::string fresh() {
    for (int round = 0;; ++round)
      for (char ch = 'd'; ch <= 'z'; ++ch) {
        std::string n(1, ch);
        if (round) n += std::to_string(round);
        if (used_.insert(n).second) return n;
      }
  }

private:
  Quasi st_;
  std::set<std::string> used_;

  void log(const std::string& rule, const std::string& ref, const std::string& before) {
    trace.push_back({rule, ref, before, show()});
  }

  bool simplify() {
    std::string before = show();
    bool changed = false;
    for (auto* as : {&st_.ant, &st_.cons}) {
      std::vector<Atom> out;
      for (const auto& a : *as) {
        Atom b{a.rel, simp(a.lhs), simp(a.rhs)};
        if (!term_eq(b.lhs, a.lhs) || !term_eq(b.rhs, a.rhs)) changed = true;
        bool dup = std::any_of(out.begin(), out.end(), [&](const Atom& o) { return atom_eq(o, b); });
        if (trivially_true(b) || dup) {
          changed = true;
          continue;
        }
        out.push_back(b);
      }
      *as = std::move(out);
    }
    if (changed) log("simplify", "lattice unit, zero and idempotence laws; trivial atoms dropped", before);
    return changed;
  }

  bool split() {
    for (auto* as : {&st_.ant, &st_.cons})
      for (size_t i = 0; i < as->size(); ++i) {
        Atom a = (*as)[i];
        if (a.rel != Rel::Leq) continue;
        std::string before = show();
        if (a.rhs->op == Op::And) {
          (*as)[i] = {Rel::Leq, a.lhs, a.rhs->l};
          as->insert(as->begin() + static_cast<long>(i) + 1, Atom{Rel::Leq, a.lhs, a.rhs->r});
          log("split-meet", "x <= s /\\ t iff x <= s and x <= t", before);
          return true;
        }
        if (a.lhs->op == Op::Or) {
          (*as)[i] = {Rel::Leq, a.lhs->l, a.rhs};
          as->insert(as->begin() + static_cast<long>(i) + 1, Atom{Rel::Leq, a.lhs->r, a.rhs});
          log("split-join", "s \\/ t <= x iff s <= x and t <= x", before);
          return true;
        }
      }
    return false;
  }

  bool residuate() {
    for (auto* as : {&st_.ant, &st_.cons})
      for (auto& a : *as) {
        if (a.rel != Rel::Leq) continue;
        std::string before = show();
        if (a.rhs->op == Op::Imp) {
          a = {Rel::Prec, mk_and(a.rhs->l, a.lhs), a.rhs->r};
          log("residuate-imp", "c <= a -> b iff a /\\ c prec b", before);
          return true;
        }
        if (a.lhs->op == Op::CoImp) {
          a = {Rel::Prec, a.lhs->r, mk_or(a.lhs->l, a.rhs)};
          log("residuate-coimp", "a >- b <= c iff b prec a \\/ c", before);
          return true;
        }
      }
    return false;
  }

  // Names a maximal slanted subterm X by a fresh variable y, keeping the atom's truth value:
  // on the monotone side A(X) iff exists y (y <= X & A(y)) iff forall y (X <= y => A(y)),
  // on the antitone side A(X) iff exists y (X <= y & A(y)) iff forall y (y <= X => A(y)).
  bool flatten() {
    for (int in_cons = 0; in_cons < 2; ++in_cons) {
      auto& as = in_cons ? st_.cons : st_.ant;
      for (size_t i = 0; i < as.size(); ++i)
        for (int side = 0; side < 2; ++side) {
          const bool monotone = side == 1;
          Term t = monotone ? as[i].rhs : as[i].lhs;
          std::vector<bool> path;
          std::vector<std::vector<bool>> found;
          maximal_slanted(t, path, found);
          for (const auto& p : found) {
            Term x = at_path(t, p);
            bool exists_ok = monotone ? x->op == Op::Imp : x->op == Op::CoImp;
            bool forall_ok = in_cons && !exists_ok && !mentions_any(x, st_.exist) &&
                             (monotone ? x->op == Op::CoImp : x->op == Op::Imp);
            if (!exists_ok && !forall_ok) continue;
            std::string before = show();
            std::string y = fresh();
            Term yv = var(y);
            Atom def = (monotone == exists_ok) ? Atom{Rel::Leq, yv, x} : Atom{Rel::Leq, x, yv};
            Term nt = replace_at(t, p, yv);
            (monotone ? as[i].rhs : as[i].lhs) = nt;
            if (exists_ok && in_cons) {
              st_.exist.push_back(y);
              st_.cons.insert(st_.cons.begin() + static_cast<long>(i) + 1, def);
              log("flatten-exists", "compactness: a witness between the subterm and the atom", before);
            } else if (exists_ok) {
              st_.univ.push_back(y);
              st_.ant.insert(st_.ant.begin() + static_cast<long>(i) + 1, def);
              log("flatten-exists", "compactness: a witness in the antecedent is universal", before);
            } else {
              st_.univ.push_back(y);
              st_.ant.push_back(def);
              log("flatten-forall",
                  "single-occurrence monotonicity: the bound moves to the antecedent", before);
            }
            return true;
          }
        }
    }
    return false;
  }

  // forall x (t <= x & A ==> C) iff (A ==> C)[t/x] when A is antitone and C monotone in x;
  // dually for x <= t.
  bool ackermann() {
    for (const auto* as : {&st_.ant, &st_.cons})
      for (const auto& a : *as)
        if (atom_has_slanted(a)) return false;
    for (size_t vi = 0; vi < st_.univ.size(); ++vi) {
      const std::string& x = st_.univ[vi];
      for (size_t i = 0; i < st_.ant.size(); ++i) {
        const Atom& a = st_.ant[i];
        if (a.rel != Rel::Leq) continue;
        bool lower = a.rhs->op == Op::Var && a.rhs->name == x && count_var(a.lhs, x) == 0;
        bool upper = a.lhs->op == Op::Var && a.lhs->name == x && count_var(a.rhs, x) == 0;
        if (!lower && !upper) continue;
        // lower bound t <= x: x may occur only on left sides of the antecedent, right sides of the consequent.
        bool ok = true;
        for (size_t j = 0; j < st_.ant.size() && ok; ++j) {
          if (j == i) continue;
          ok = count_var(lower ? st_.ant[j].rhs : st_.ant[j].lhs, x) == 0;
        }
        for (const auto& c : st_.cons)
          if (ok) ok = count_var(lower ? c.lhs : c.rhs, x) == 0;
        if (!ok) continue;
        std::string before = show();
        Term t = lower ? a.lhs : a.rhs;
        st_.ant.erase(st_.ant.begin() + static_cast<long>(i));
        for (auto* bs : {&st_.ant, &st_.cons})
          for (auto& b : *bs) b = {b.rel, substitute(b.lhs, x, t), substitute(b.rhs, x, t)};
        st_.univ.erase(st_.univ.begin() + static_cast<long>(vi));
        log("ackermann", "a bounded universal variable is replaced by its bound", before);
        return true;
      }
    }
    return false;
  }
};

std::string offending_message(const AnalyticVerdict& v) {
  std::string s = "inequality is not analytic; offending branch: ";
  auto bad = v.offending();
  return s + (bad.empty() ? "?" : print_branch(bad.front()));
}

} // namespace

CorrespondResult correspond(const Inequality& input) {
  AnalyticVerdict verdict = is_analytic(input);
  if (!verdict.analytic) throw CorrespondError(offending_message(verdict), {}, print_inequality(input));

  std::vector<TraceStep> pre;
  Inequality q{expand_negations(input.lhs), expand_negations(input.rhs)};
  if (!term_eq(q.lhs, input.lhs) || !term_eq(q.rhs, input.rhs))
    pre.push_back({"expand-negations", "neg a = a -> bot, sim a = a >- top", print_inequality(input),
                   print_inequality(q)});
  const std::string start = print_inequality(q);
  std::vector<std::string> vars = inequality_vars(q);
  std::set<std::string> used(vars.begin(), vars.end());

  struct Attempt {
    std::string rule, ref;
    int kind; // 0: plain atom, 1: approximate lhs, 2: approximate rhs
  };
  std::vector<Attempt> attempts;
  if (!has_slanted(q.lhs)) {
    attempts.push_back({"atom", "the inequality read as a universally closed atom", 0});
  } else {
    attempts.push_back({"approximate", "denseness: lhs <= rhs iff every d <= lhs has d <= rhs", 1});
    attempts.push_back({"approximate-right", "denseness: lhs <= rhs iff every e >= rhs has lhs <= e", 2});
    attempts.push_back({"atom", "the inequality read as a universally closed atom", 0});
  }

  std::optional<CorrespondError> first_error;
  for (const auto& at : attempts) {
    Engine probe({}, used);
    Quasi st;
    st.univ = vars;
    if (at.kind == 0) {
      st.cons = {Atom{Rel::Leq, q.lhs, q.rhs}};
    } else {
      std::string d = probe.fresh();
      st.univ.push_back(d);
      if (at.kind == 1) {
        st.ant = {Atom{Rel::Leq, var(d), q.lhs}};
        st.cons = {Atom{Rel::Leq, var(d), q.rhs}};
      } else {
        st.ant = {Atom{Rel::Leq, q.rhs, var(d)}};
        st.cons = {Atom{Rel::Leq, q.lhs, var(d)}};
      }
    }
    Engine e(st, used);
    e.trace = pre;
    e.trace.push_back({at.rule, at.ref, start, e.show()});
    if (e.run()) return {to_condition(e.state()), e.trace};
    if (!first_error)
      first_error.emplace("no rule applies: " + e.show(), e.trace, e.show());
  }
  throw *first_error;
}

} // namespace subkit
