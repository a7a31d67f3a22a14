#include "subkit/kracht.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace subkit {

char role_char(Role r) {
  switch (r) {
  case Role::V: return 'v';
  case Role::A: return 'a';
  case Role::B: return 'b';
  case Role::C: return 'c';
  case Role::D: return 'd';
  }
  return '?';
}

RoleMap parse_roles(const std::string& spec) {
  RoleMap out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 2 != item.size())
      throw Error("bad role entry '" + item + "', expected name=role");
    static const std::string roles = "vabcd";
    auto k = roles.find(item[eq + 1]);
    if (k == std::string::npos) throw Error("unknown role '" + item.substr(eq + 1) + "'");
    out[item.substr(0, eq)] = static_cast<Role>(k);
  }
  return out;
}

Atom restrictor_atom(const Restrictor& r) {
  return restrictor_atom(Quant{r.exists, r.vars, r.kind, r.by});
}

namespace {

void split(const Term& t, Op op, std::vector<Term>& out) {
  if (t->op == op) {
    split(t->l, op, out);
    split(t->r, op, out);
  } else {
    out.push_back(t);
  }
}

Term fold(const std::vector<Term>& ts, Op op) {
  if (ts.empty()) return op == Op::And ? top() : bot();
  Term acc = ts.front();
  for (size_t i = 1; i < ts.size(); ++i) acc = op == Op::And ? mk_and(acc, ts[i]) : mk_or(acc, ts[i]);
  return acc;
}

bool is_var(const Term& t, const std::string& x) { return t->op == Op::Var && t->name == x; }

// 1: left side, 2: right side, 3: both.
int side(const Atom& a, const std::string& x) {
  return (count_var(a.lhs, x) ? 1 : 0) | (count_var(a.rhs, x) ? 2 : 0);
}

// x occurs once, alone on one side of <= or as a top-level conjunct (left) / disjunct (right) of prec.
bool displayable(const Atom& a, const std::string& x) {
  int cl = count_var(a.lhs, x), cr = count_var(a.rhs, x);
  if (cl + cr != 1) return false;
  if (a.rel == Rel::Leq) return is_var(cl ? a.lhs : a.rhs, x);
  std::vector<Term> parts;
  split(cl ? a.lhs : a.rhs, cl ? Op::And : Op::Or, parts);
  return std::any_of(parts.begin(), parts.end(), [&](const Term& t) { return is_var(t, x); });
}

// Rewrites an atom as a slanted inequality with x alone on one side (prec atoms only).
Atom display(const Atom& a, const std::optional<std::string>& x) {
  if (a.rel == Rel::Leq) return a;
  if (!x) return {Rel::Leq, a.lhs, mk_imp(top(), a.rhs)};
  const bool left = count_var(a.lhs, *x) > 0;
  std::vector<Term> parts, rest;
  split(left ? a.lhs : a.rhs, left ? Op::And : Op::Or, parts);
  bool skipped = false;
  for (const auto& p : parts) {
    if (!skipped && is_var(p, *x)) {
      skipped = true;
      continue;
    }
    rest.push_back(p);
  }
  if (left) return {Rel::Leq, var(*x), mk_imp(fold(rest, Op::And), a.rhs)};
  return {Rel::Leq, mk_coimp(fold(rest, Op::Or), a.lhs), var(*x)};
}

Atom display_restrictor(const Restrictor& r) {
  const Term& x = r.by;
  auto y = [&](size_t i) { return var(r.vars.at(i)); };
  switch (r.kind) {
  case Restr::Prec: return {Rel::Leq, mk_coimp(bot(), y(0)), x};
  case Restr::Succ: return {Rel::Leq, x, mk_imp(top(), y(0))};
  case Restr::LeqCoimp: return {Rel::Leq, mk_coimp(y(0), y(1)), x};
  case Restr::GeqImp: return {Rel::Leq, x, mk_imp(y(0), y(1))};
  default: return restrictor_atom(r);
  }
}

// Bit 1: some occurrence is monotone; bit 2: some occurrence is antitone.
void polarity(const Term& t, const std::string& x, bool pos, int& acc) {
  switch (t->op) {
  case Op::Var:
    if (t->name == x) acc |= pos ? 1 : 2;
    return;
  case Op::And:
  case Op::Or:
    polarity(t->l, x, pos, acc);
    polarity(t->r, x, pos, acc);
    return;
  case Op::Imp:
  case Op::CoImp:
    polarity(t->l, x, !pos, acc);
    polarity(t->r, x, pos, acc);
    return;
  case Op::Neg:
  case Op::Sim: polarity(t->l, x, !pos, acc); return;
  default: return;
  }
}

int atom_polarity(const Atom& a, const std::string& x) {
  int acc = 0;
  polarity(a.lhs, x, false, acc);
  polarity(a.rhs, x, true, acc);
  return acc;
}

// Lowest node of t holding two occurrences of x.
Term first_common_ancestor(const Term& t, const std::string& x) {
  if (is_binary(t->op)) {
    if (count_var(t->l, x) >= 2) return first_common_ancestor(t->l, x);
    if (count_var(t->r, x) >= 2) return first_common_ancestor(t->r, x);
  }
  return t;
}

std::string str(const Atom& a) { return print_atom(a); }

} // namespace

std::string print_kracht(const KrachtFormula& k) {
  std::string s = "roles:";
  for (const auto& v : k.univ) s += " " + v + "=" + role_char(k.roles.at(v));
  for (const auto& v : k.exist) s += " " + v + "=" + role_char(k.roles.at(v));
  s += "\nrestrictors:";
  if (k.restrictors.empty()) s += " (none)";
  for (const auto& r : k.restrictors)
    s += "\n  " + std::string(r.exists ? "exists " : "forall ") + str(restrictor_atom(r));
  auto conj = [](const std::vector<Atom>& as) {
    if (as.empty()) return std::string("(empty)");
    std::string out;
    for (size_t i = 0; i < as.size(); ++i) out += (i ? " & " : "") + print_atom(as[i]);
    return out;
  };
  return s + "\neta: " + conj(k.eta) + "\nzeta: " + conj(k.zeta);
}

namespace {

class Inverter {
public:
  explicit Inverter(const KrachtFormula& k) : k_(k) {
    st_.univ = k.univ;
    st_.exist = k.exist;
  }

  InvertResult run() {
    Quasi orig = st_;
    for (const auto& r : k_.restrictors) (r.exists ? orig.cons : orig.ant).push_back(restrictor_atom(r));
    orig.ant.insert(orig.ant.end(), k_.eta.begin(), k_.eta.end());
    orig.cons.insert(orig.cons.end(), k_.zeta.begin(), k_.zeta.end());
    const std::string start = print_condition(to_condition(orig));

    for (const auto& r : k_.restrictors) (r.exists ? st_.cons : st_.ant).push_back(display_restrictor(r));
    for (const auto& a : k_.eta) st_.ant.push_back(display(a, designated(a, false)));
    for (const auto& a : k_.zeta) st_.cons.push_back(display(a, designated(a, true)));
    trace_.push_back({"display", "c <= a -> b iff a /\\ c prec b; a >- b <= c iff b prec a \\/ c",
                      start, show()});

    eliminate_restricted();
    for (const auto& x : k_.univ) {
      Role r = k_.roles.at(x);
      if (r == Role::A || r == Role::B) eliminate_outer(x, r == Role::A);
    }
    if (!st_.ant.empty())
      throw InvertError("antecedent atom without an a- or b-variable remains: " + str(st_.ant.front()));
    return {merge(), trace_};
  }

private:
  const KrachtFormula& k_;
  Quasi st_;
  std::vector<TraceStep> trace_;

  std::string show() const { return print_condition(to_condition(st_)); }
  Role role(const std::string& v) const {
    auto it = k_.roles.find(v);
    return it == k_.roles.end() ? Role::V : it->second;
  }

  std::optional<std::string> designated(const Atom& a, bool in_zeta) const {
    std::vector<std::string> vs;
    collect_vars(a.lhs, vs);
    collect_vars(a.rhs, vs);
    if (in_zeta)
      for (const auto& v : vs)
        if (role(v) == Role::D) return v;
    for (const auto& v : vs)
      if (role(v) != Role::V && role(v) != Role::D) return v;
    return std::nullopt;
  }

  void substitute_all(std::vector<Atom>& as, const std::string& x, const Term& t) {
    for (auto& a : as) a = {a.rel, substitute(a.lhs, x, t), substitute(a.rhs, x, t)};
  }

  // Ackermann step on one side: the displayed bounds of y are joined into a single value that
  // replaces y wherever else it occurs with the matching polarity.
  bool ackermann(std::vector<Atom>& as, const std::string& y) {
    for (int upper = 1; upper >= 0; --upper) {
      std::vector<Term> bounds;
      std::vector<Atom> rest;
      bool ok = true;
      for (const auto& a : as) {
        bool is_bound = a.rel == Rel::Leq && (upper ? is_var(a.lhs, y) && !count_var(a.rhs, y)
                                                    : is_var(a.rhs, y) && !count_var(a.lhs, y));
        if (is_bound) {
          bounds.push_back(upper ? a.rhs : a.lhs);
          continue;
        }
        int p = atom_polarity(a, y);
        if (p && p != (upper ? 1 : 2)) ok = false;
        rest.push_back(a);
      }
      if (!ok) continue;
      Term value = fold(bounds, upper ? Op::And : Op::Or);
      substitute_all(rest, y, value);
      as = std::move(rest);
      return true;
    }
    return false;
  }

  void eliminate_restricted() {
    std::vector<std::string> pending;
    for (const auto& r : k_.restrictors) pending.insert(pending.end(), r.vars.begin(), r.vars.end());
    while (!pending.empty()) {
      // Restricted variables go before the variables restricting them.
      auto blocked = [&](const std::string& y) {
        for (const auto& r : k_.restrictors)
          if (r.by && is_var(r.by, y))
            for (const auto& z : r.vars)
              if (std::find(pending.begin(), pending.end(), z) != pending.end()) return true;
        return false;
      };
      auto it = std::find_if(pending.begin(), pending.end(), [&](const auto& y) { return !blocked(y); });
      if (it == pending.end()) throw InvertError("restricting variables form a cycle");
      const std::string y = *it;
      pending.erase(it);
      const bool in_cons = role(y) == Role::D;
      auto& other = in_cons ? st_.ant : st_.cons;
      if (std::any_of(other.begin(), other.end(), [&](const Atom& a) { return side(a, y) != 0; }))
        throw InvertError("variable " + y + " occurs on both sides of the implication");
      std::string before = show();
      if (!ackermann(in_cons ? st_.cons : st_.ant, y))
        throw InvertError("no displayable side for " + y + " in: " + before);
      auto& list = in_cons ? st_.exist : st_.univ;
      list.erase(std::remove(list.begin(), list.end(), y), list.end());
      trace_.push_back({"ackermann-" + std::string(1, role_char(role(y))),
                        "compactness: a restricted variable is replaced by its displayed bound",
                        before, show()});
    }
  }

  void eliminate_outer(const std::string& x, bool positive) {
    std::string before = show();
    std::vector<Term> bounds;
    std::vector<Atom> ant;
    for (const auto& a : st_.ant) {
      if (!side(a, x)) {
        ant.push_back(a);
        continue;
      }
      bool bound = a.rel == Rel::Leq && (positive ? is_var(a.lhs, x) && !count_var(a.rhs, x)
                                                  : is_var(a.rhs, x) && !count_var(a.lhs, x));
      if (!bound) throw InvertError("occurrence of " + x + " is not displayed: " + str(a));
      bounds.push_back(positive ? a.rhs : a.lhs);
    }
    for (const auto& a : st_.cons) {
      int p = atom_polarity(a, x);
      if (p && p != (positive ? 2 : 1))
        throw InvertError("occurrence of " + x + " has the wrong polarity: " + str(a));
    }
    st_.ant = std::move(ant);
    substitute_all(st_.cons, x, fold(bounds, positive ? Op::And : Op::Or));
    st_.univ.erase(std::remove(st_.univ.begin(), st_.univ.end(), x), st_.univ.end());
    trace_.push_back({std::string("eliminate-") + (positive ? "a" : "b"),
                      positive ? "denseness: forall x (x <= s ==> x <= t) iff s <= t"
                               : "denseness: forall x (t <= x ==> s <= x) iff s <= t",
                      before, show()});
  }

  Inequality merge() {
    std::vector<Atom> cs;
    for (const auto& a : st_.cons) cs.push_back(display(a, std::nullopt));
    while (cs.size() > 1) {
      std::string before = show();
      bool merged = false;
      for (size_t i = 0; i < cs.size() && !merged; ++i)
        for (size_t j = i + 1; j < cs.size() && !merged; ++j) {
          if (term_eq(cs[i].lhs, cs[j].lhs)) {
            cs[i] = {Rel::Leq, cs[i].lhs, mk_and(cs[i].rhs, cs[j].rhs)};
          } else if (term_eq(cs[i].rhs, cs[j].rhs)) {
            cs[i] = {Rel::Leq, mk_or(cs[i].lhs, cs[j].lhs), cs[i].rhs};
          } else {
            continue;
          }
          cs.erase(cs.begin() + static_cast<long>(j));
          merged = true;
        }
      if (!merged) throw InvertError("consequent does not reduce to a single inequality: " + before);
      st_.cons = cs;
      trace_.push_back({"merge", "s <= t & s <= u iff s <= t /\\ u; dually for joins", before, show()});
    }
    if (cs.empty()) return {top(), top()};
    return {cs.front().lhs, cs.front().rhs};
  }
};

} // namespace

InvertResult invert(const KrachtFormula& k) { return Inverter(k).run(); }

namespace {

struct Layout {
  std::vector<std::string> univ, exist;
  std::vector<Restrictor> explicit_r;
  std::vector<Atom> ant, cons;
  std::vector<ShapeViolation> problems;
};

Layout layout(const Condition& c0) {
  Condition c = close_universally(c0);
  Layout l;
  bool seen_exists = false;
  auto take = [&](const Quant& q, bool exists) {
    auto& vs = exists ? l.exist : l.univ;
    vs.insert(vs.end(), q.vars.begin(), q.vars.end());
    if (q.restr != Restr::None) l.explicit_r.push_back({exists, q.vars, q.restr, q.by, true});
  };
  for (const auto& q : c.prefix) {
    if (q.exists) {
      seen_exists = true;
      if (c.implication)
        l.problems.push_back({0, "existential quantifier over " + q.vars.front() + " before the antecedent"});
    } else if (seen_exists) {
      l.problems.push_back({0, "universal quantifier over " + q.vars.front() + " after an existential"});
    }
    take(q, q.exists);
  }
  for (const auto& q : c.inner) {
    if (!q.exists)
      l.problems.push_back({0, "universal quantifier over " + q.vars.front() + " in the consequent"});
    take(q, q.exists);
  }
  l.ant = c.antecedent;
  l.cons = c.consequent;
  return l;
}

bool restricting_term_ok(const Term& t) {
  return t->op == Op::Var || t->op == Op::Top || t->op == Op::Bot;
}

// Every reading of an atom as a restricting inequality.
std::vector<Restrictor> readings(const Atom& a, bool exists) {
  std::vector<Restrictor> out;
  auto add = [&](Restr k, std::vector<Term> ys, const Term& x) {
    std::vector<std::string> names;
    for (const auto& y : ys) {
      if (y->op != Op::Var) return;
      names.push_back(y->name);
    }
    if (!restricting_term_ok(x)) return;
    if (names.size() == 2 && names[0] == names[1]) return;
    if (x->op == Op::Var && std::find(names.begin(), names.end(), x->name) != names.end()) return;
    out.push_back({exists, names, k, x, false});
  };
  if (a.rel == Rel::Prec) {
    add(Restr::Prec, {a.lhs}, a.rhs);
    add(Restr::Succ, {a.rhs}, a.lhs);
    if (a.rhs->op == Op::Or) add(Restr::LeqCoimp, {a.rhs->l, a.lhs}, a.rhs->r);
    if (a.lhs->op == Op::And) add(Restr::GeqImp, {a.lhs->r, a.rhs}, a.lhs->l);
  } else {
    add(Restr::Leq, {a.lhs}, a.rhs);
    add(Restr::Geq, {a.rhs}, a.lhs);
    if (a.rhs->op == Op::Or) add(Restr::LeqOr, {a.rhs->l, a.rhs->r}, a.lhs);
    if (a.lhs->op == Op::And) add(Restr::LeqAnd, {a.lhs->l, a.lhs->r}, a.rhs);
  }
  return out;
}

class Checker {
public:
  Checker(const Layout& l, RoleMap roles) : l_(l), roles_(std::move(roles)) {
    for (const auto& v : l_.exist) roles_[v] = Role::D;
  }

  // Best restrictor selection for the fixed roles.
  ShapeReport best() {
    for (const auto& r : l_.explicit_r)
      for (const auto& v : r.vars) covered_.push_back(v);
    for (const auto& v : l_.univ)
      if (role(v) == Role::C && !covered(v)) needed_.push_back(v);
    for (const auto& v : l_.exist)
      if (!covered(v)) needed_.push_back(v);
    used_ant_.assign(l_.ant.size(), false);
    used_cons_.assign(l_.cons.size(), false);
    search(0);
    return best_;
  }

private:
  const Layout& l_;
  RoleMap roles_;
  std::vector<std::string> needed_, covered_;
  std::vector<bool> used_ant_, used_cons_;
  std::vector<std::pair<bool, size_t>> chosen_; // (in consequent, atom index)
  std::vector<Restrictor> chosen_r_;
  ShapeReport best_;
  bool have_best_ = false;

  Role role(const std::string& v) const {
    auto it = roles_.find(v);
    return it == roles_.end() ? Role::V : it->second;
  }
  bool covered(const std::string& v) const {
    return std::find(covered_.begin(), covered_.end(), v) != covered_.end();
  }

  void search(size_t i) {
    if (have_best_ && best_.valid) return;
    while (i < needed_.size() && covered(needed_[i])) ++i;
    if (i == needed_.size()) {
      consider();
      return;
    }
    const std::string& y = needed_[i];
    const bool in_cons = role(y) == Role::D;
    const auto& atoms = in_cons ? l_.cons : l_.ant;
    auto& used = in_cons ? used_cons_ : used_ant_;
    for (size_t k = 0; k < atoms.size(); ++k) {
      if (used[k]) continue;
      for (const auto& r : readings(atoms[k], in_cons)) {
        if (std::find(r.vars.begin(), r.vars.end(), y) == r.vars.end()) continue;
        bool fits = std::all_of(r.vars.begin(), r.vars.end(), [&](const std::string& v) {
          return role(v) == role(y) && !covered(v) &&
                 std::find(needed_.begin(), needed_.end(), v) != needed_.end();
        });
        if (!fits) continue;
        used[k] = true;
        size_t mark = covered_.size();
        covered_.insert(covered_.end(), r.vars.begin(), r.vars.end());
        chosen_r_.push_back(r);
        chosen_.push_back({in_cons, k});
        search(i + 1);
        chosen_.pop_back();
        chosen_r_.pop_back();
        covered_.resize(mark);
        used[k] = false;
      }
    }
    search(i + 1); // leave y without a restrictor; reported below
  }

  void consider() {
    ShapeReport rep;
    KrachtFormula& k = rep.formula;
    k.univ = l_.univ;
    k.exist = l_.exist;
    for (const auto& v : l_.univ) k.roles[v] = role(v);
    for (const auto& v : l_.exist) k.roles[v] = Role::D;
    std::vector<std::pair<size_t, Restrictor>> sel_c, sel_d;
    for (size_t i = 0; i < chosen_.size(); ++i)
      (chosen_[i].first ? sel_d : sel_c).push_back({chosen_[i].second, chosen_r_[i]});
    std::sort(sel_c.begin(), sel_c.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::sort(sel_d.begin(), sel_d.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (const auto& r : l_.explicit_r)
      if (!r.exists) k.restrictors.push_back(r);
    for (const auto& [_, r] : sel_c) k.restrictors.push_back(r);
    for (const auto& r : l_.explicit_r)
      if (r.exists) k.restrictors.push_back(r);
    for (const auto& [_, r] : sel_d) k.restrictors.push_back(r);
    for (size_t i = 0; i < l_.ant.size(); ++i)
      if (!used_ant_[i]) k.eta.push_back(l_.ant[i]);
    for (size_t i = 0; i < l_.cons.size(); ++i)
      if (!used_cons_[i]) k.zeta.push_back(l_.cons[i]);
    check(rep);
    rep.valid = rep.violations.empty();
    if (rep.valid) {
      try {
        invert(k);
      } catch (const InvertError& e) {
        rep.violations.push_back({0, std::string("inversion blocked: ") + e.what()});
        rep.valid = false;
      }
    }
    if (!have_best_ || rep.violations.size() < best_.violations.size()) {
      best_ = std::move(rep);
      have_best_ = true;
    }
  }

  void check(ShapeReport& rep) const {
    const KrachtFormula& k = rep.formula;
    auto& out = rep.violations;
    out = l_.problems;
    for (const auto& v : needed_)
      if (!covered(v)) out.push_back({0, "no restricting inequality for " + v});

    for (const auto& r : k.restrictors) {
      Atom ra = restrictor_atom(r);
      if (r.kind == Restr::LeqOr || r.kind == Restr::LeqAnd)
        rep.notes.push_back("restrictor " + str(ra) + " uses the join/meet restricted quantifier");
      if (r.by->op != Op::Var) {
        rep.notes.push_back("constant restricting term in " + str(ra));
        continue;
      }
      Role rr = role(r.by->name);
      if (rr == Role::V)
        rep.notes.push_back("v-variable " + r.by->name + " restricts in " + str(ra));
      if ((r.exists && rr == Role::C) || (!r.exists && rr == Role::D))
        out.push_back({2, r.by->name + " cannot restrict " + r.vars.front() + " in " + str(ra)});
    }

    std::vector<Atom> all;
    for (const auto& r : k.restrictors) all.push_back(restrictor_atom(r));
    all.insert(all.end(), k.eta.begin(), k.eta.end());
    all.insert(all.end(), k.zeta.begin(), k.zeta.end());
    std::vector<std::string> vars = l_.univ;
    vars.insert(vars.end(), l_.exist.begin(), l_.exist.end());

    for (const auto& a : all)
      for (const auto& v : vars) {
        int s = side(a, v);
        if (role(v) == Role::A && (s & 2))
          out.push_back({4, "a-variable " + v + " occurs negatively in " + str(a)});
        if (role(v) == Role::B && (s & 1))
          out.push_back({4, "b-variable " + v + " occurs positively in " + str(a)});
      }

    auto sides_in = [&](const std::vector<Atom>& as, const std::string& v) {
      int s = 0;
      for (const auto& a : as) s |= side(a, v);
      return s;
    };
    for (const auto& v : vars) {
      Role r = role(v);
      if (r != Role::C && r != Role::D) continue;
      const auto& body = r == Role::C ? k.eta : k.zeta;
      int s = sides_in(body, v);
      if (s == 3) out.push_back({5, v + " occurs on both sides within its block"});
      if (r == Role::C && sides_in(k.zeta, v))
        out.push_back({5, "c-variable " + v + " occurs in the consequent"});
      for (const auto& rs : k.restrictors) {
        Atom ra = restrictor_atom(rs);
        bool restricted = std::find(rs.vars.begin(), rs.vars.end(), v) != rs.vars.end();
        if (restricted && s && s != 3 && side(ra, v) == s)
          out.push_back({5, v + " has the same side in " + str(ra) + " as in its block"});
        if (!restricted && rs.by->op == Op::Var && rs.by->name == v && s && s != 3 && side(ra, v) != s)
          out.push_back({6, "restricting occurrence of " + v + " in " + str(ra) +
                                " differs in polarity from its block"});
      }
    }

    auto check_block = [&](const std::vector<Atom>& as, bool zeta) {
      for (const auto& a : as) {
        int non_v = 0, d_occ = 0;
        for (const auto& v : vars) {
          Role r = role(v);
          if (r == Role::V) continue;
          int n = count_var(a.lhs, v) + count_var(a.rhs, v);
          if (!n) continue;
          if (!displayable(a, v)) out.push_back({7, v + " is not displayable in " + str(a)});
          if (r == Role::D) d_occ += n;
          else non_v += n;
          if (zeta && (r == Role::A || r == Role::B) && n >= 2) {
            int sd = side(a, v);
            Term fca = sd == 1 ? first_common_ancestor(a.lhs, v)
                     : sd == 2 ? first_common_ancestor(a.rhs, v) : nullptr;
            bool ok = fca && ((sd == 1 && fca->op == Op::And) || (sd == 2 && fca->op == Op::Or));
            if (!ok)
              out.push_back({9, "occurrences of " + v + " in " + str(a) +
                                    " do not meet at a positive meet or negative join"});
          }
        }
        if (!zeta && non_v != 1)
          out.push_back({8, str(a) + " has " + std::to_string(non_v) +
                                " occurrences of a-, b- or c-variables"});
        if (zeta && d_occ > 1) out.push_back({9, str(a) + " has more than one d-variable"});
      }
    };
    check_block(k.eta, false);
    check_block(k.zeta, true);
  }
};

int occurrence_sides(const Layout& l, const std::string& v) {
  int s = 0;
  for (const auto* as : {&l.ant, &l.cons})
    for (const auto& a : *as) s |= side(a, v);
  for (const auto& r : l.explicit_r) s |= side(restrictor_atom(r), v);
  return s;
}

bool in_atoms(const std::vector<Atom>& as, const std::string& v) {
  return std::any_of(as.begin(), as.end(), [&](const Atom& a) { return side(a, v) != 0; });
}

} // namespace

ShapeReport validate_shape(const Condition& c, const std::optional<RoleMap>& fixed) {
  Layout l = layout(c);
  if (l.univ.size() + l.exist.size() > 10)
    return {false, {}, {{0, "more than 10 variables"}}, {}};
  std::vector<std::string> restricted;
  for (const auto& r : l.explicit_r)
    if (!r.exists) restricted.insert(restricted.end(), r.vars.begin(), r.vars.end());
  auto is_restricted = [&](const std::string& v) {
    return std::find(restricted.begin(), restricted.end(), v) != restricted.end();
  };

  if (fixed) {
    RoleMap roles;
    for (const auto& v : l.univ) {
      auto it = fixed->find(v);
      roles[v] = it != fixed->end() ? it->second : is_restricted(v) ? Role::C : Role::V;
    }
    return Checker(l, roles).best();
  }

  std::vector<std::vector<Role>> allowed;
  for (const auto& v : l.univ) {
    if (is_restricted(v)) {
      allowed.push_back({Role::C});
      continue;
    }
    std::vector<Role> rs{Role::V};
    int s = occurrence_sides(l, v);
    if (s == 1) rs.push_back(Role::A);
    if (s == 2) rs.push_back(Role::B);
    if (in_atoms(l.ant, v) && !in_atoms(l.cons, v)) rs.push_back(Role::C);
    allowed.push_back(rs);
  }

  ShapeReport best;
  bool have = false;
  const size_t n = l.univ.size();
  for (size_t k = 0; k <= n; ++k) {
    std::vector<size_t> idx(n, 0);
    while (true) {
      size_t non_v = 0;
      for (size_t i = 0; i < n; ++i) non_v += allowed[i][idx[i]] != Role::V ? 1 : 0;
      if (non_v == k) {
        RoleMap roles;
        for (size_t i = 0; i < n; ++i) roles[l.univ[i]] = allowed[i][idx[i]];
        ShapeReport rep = Checker(l, roles).best();
        if (rep.valid) return rep;
        if (!have || rep.violations.size() < best.violations.size()) {
          best = std::move(rep);
          have = true;
        }
      }
      size_t i = 0;
      while (i < n && ++idx[i] == allowed[i].size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  if (!have) return Checker(l, {}).best();
  return best;
}

} // namespace subkit
