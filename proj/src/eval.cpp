#include "subkit/eval.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace subkit {

Elem eval_term(const Model& m, const Assignment& env, const Term& t) {
  const Lattice& l = m.lattice();
  switch (t->op) {
  case Op::Var: {
    auto it = env.find(t->name);
    if (it == env.end()) throw Error("unbound variable: " + t->name);
    return it->second;
  }
  case Op::Bot: return l.bot();
  case Op::Top: return l.top();
  case Op::And: return l.meet(eval_term(m, env, t->l), eval_term(m, env, t->r));
  case Op::Or: return l.join(eval_term(m, env, t->l), eval_term(m, env, t->r));
  case Op::Imp: return m.imp(eval_term(m, env, t->l), eval_term(m, env, t->r));
  case Op::CoImp: return m.coimp(eval_term(m, env, t->l), eval_term(m, env, t->r));
  case Op::Neg: return m.neg(eval_term(m, env, t->l));
  case Op::Sim: return m.sim(eval_term(m, env, t->l));
  }
  throw Error("bad term");
}

bool eval_atom(const Model& m, const Assignment& env, const Atom& a) {
  Elem x = eval_term(m, env, a.lhs), y = eval_term(m, env, a.rhs);
  return a.rel == Rel::Leq ? m.lattice().leq(x, y) : m.prec(x, y);
}

namespace {

// Terms compiled against a slot table so the hot loops avoid map lookups.
struct Compiled {
  struct N {
    Op op;
    int slot; // Var
    int l, r;
  };
  std::vector<N> nodes;

  int add(const Term& t, const std::map<std::string, int>& slots) {
    N n{t->op, -1, -1, -1};
    if (t->op == Op::Var) n.slot = slots.at(t->name);
    if (t->l) n.l = add(t->l, slots);
    if (t->r) n.r = add(t->r, slots);
    nodes.push_back(n);
    return static_cast<int>(nodes.size()) - 1;
  }

  Elem eval(const Model& m, const std::vector<Elem>& env, int i) const {
    const N& n = nodes[i];
    const Lattice& l = m.lattice();
    switch (n.op) {
    case Op::Var: return env[n.slot];
    case Op::Bot: return l.bot();
    case Op::Top: return l.top();
    case Op::And: return l.meet(eval(m, env, n.l), eval(m, env, n.r));
    case Op::Or: return l.join(eval(m, env, n.l), eval(m, env, n.r));
    case Op::Imp: return m.imp(eval(m, env, n.l), eval(m, env, n.r));
    case Op::CoImp: return m.coimp(eval(m, env, n.l), eval(m, env, n.r));
    case Op::Neg: return m.neg(eval(m, env, n.l));
    case Op::Sim: return m.sim(eval(m, env, n.l));
    }
    return 0;
  }
};

struct CAtom {
  Rel rel;
  int lhs, rhs;
  std::vector<int> slots; // variables mentioned
};

} // namespace

IneqResult eval_inequality(const Model& m, const Inequality& q) {
  auto vars = inequality_vars(q);
  std::map<std::string, int> slots;
  for (size_t i = 0; i < vars.size(); ++i) slots[vars[i]] = static_cast<int>(i);
  Compiled c;
  int L = c.add(q.lhs, slots), R = c.add(q.rhs, slots);
  std::vector<Elem> env(vars.size(), 0);
  const int n = m.size();
  IneqResult res;
  // Odometer over all assignments.
  while (true) {
    Elem x = c.eval(m, env, L), y = c.eval(m, env, R);
    if (!m.lattice().leq(x, y)) {
      res.holds = false;
      res.lhs = x;
      res.rhs = y;
      for (size_t i = 0; i < vars.size(); ++i) res.witness[vars[i]] = env[i];
      return res;
    }
    size_t k = 0;
    while (k < env.size() && ++env[k] == n) env[k++] = 0;
    if (k == env.size()) break;
  }
  return res;
}

int quantifier_depth(const Condition& c) {
  int depth = 0;
  bool leading = true;
  for (const auto& q : c.prefix) {
    if (q.exists) leading = false;
    if (!leading) depth += static_cast<int>(q.vars.size());
  }
  for (const auto& q : c.inner) depth += static_cast<int>(q.vars.size());
  return depth;
}

namespace {

// Execution plan: a sequence of steps interpreted recursively.
struct Step {
  enum Kind { Bind, Guard, Require } kind;
  int slot = -1;       // Bind
  bool exists = false; // Bind
  std::vector<int> atoms; // checked after binding (Bind) or at this point (Guard/Require)
};

class Plan {
public:
  Plan(const Model& m, const Condition& cin) : m_(m) {
    Condition c = close_universally(cin);
    for (const auto* qs : {&c.prefix, &c.inner})
      for (const auto& q : *qs)
        for (const auto& v : q.vars) {
          slots_[v] = static_cast<int>(names_.size());
          names_.push_back(v);
        }
    auto runs = [](const std::vector<Quant>& qs) {
      std::vector<std::vector<const Quant*>> out;
      for (const auto& q : qs) {
        if (out.empty() || out.back().front()->exists != q.exists) out.emplace_back();
        out.back().push_back(&q);
      }
      return out;
    };
    auto pre = runs(c.prefix), inn = runs(c.inner);
    std::vector<int> ant, cons;
    for (const auto& a : c.antecedent) ant.push_back(add_atom(a));
    for (const auto& a : c.consequent) cons.push_back(add_atom(a));

    std::vector<bool> bound(names_.size(), false);
    bool ant_hoisted = c.implication && !pre.empty() && !pre.back().front()->exists;
    bool cons_hoisted = (!inn.empty() && inn.back().front()->exists) ||
                        (inn.empty() && !c.implication && !pre.empty() && pre.back().front()->exists);
    for (size_t r = 0; r < pre.size(); ++r) {
      std::vector<int> pool;
      if (r + 1 == pre.size() && ant_hoisted) pool = ant;
      if (r + 1 == pre.size() && inn.empty() && cons_hoisted) pool = cons;
      emit_run(pre[r], pool, bound);
    }
    if (c.implication && !ant_hoisted) steps_.push_back({Step::Guard, -1, false, ant});
    for (size_t r = 0; r < inn.size(); ++r) {
      std::vector<int> pool;
      if (r + 1 == inn.size() && cons_hoisted) pool = cons;
      emit_run(inn[r], pool, bound);
    }
    if (!cons_hoisted) steps_.push_back({Step::Require, -1, false, cons});
    env_.assign(names_.size(), 0);
    plan_memo();
    first_exists_ = steps_.size();
    for (size_t i = 0; i < steps_.size(); ++i)
      if (steps_[i].kind == Step::Bind && steps_[i].exists) {
        first_exists_ = i;
        break;
      }
  }

  CondResult run() {
    CondResult res;
    res.holds = exec(0);
    if (!res.holds)
      for (const auto& [slot, val] : witness_) res.witness[names_[slot]] = val;
    return res;
  }

private:
  const Model& m_;
  Compiled code_;
  std::vector<CAtom> atoms_;
  std::map<std::string, int> slots_;
  std::vector<std::string> names_;
  std::vector<Step> steps_;
  std::vector<Elem> env_;
  std::vector<std::pair<int, Elem>> witness_;
  bool witnessed_ = false;
  size_t first_exists_ = 0; // witnesses are only meaningful before the first existential
  // Results of Bind steps keyed by the values of the variables they read but do not bind.
  std::vector<std::vector<int>> live_in_;
  std::vector<std::unordered_map<std::uint64_t, bool>> memo_;
  int bits_ = 1;
  static constexpr size_t kMemoCap = size_t{1} << 22;

  void plan_memo() {
    while ((1 << bits_) < m_.size()) ++bits_;
    live_in_.assign(steps_.size(), {});
    memo_.assign(steps_.size(), {});
    std::vector<bool> read(names_.size(), false);
    for (size_t i = steps_.size(); i-- > 0;) {
      for (int a : steps_[i].atoms)
        for (int s : atoms_[a].slots) read[s] = true;
      if (steps_[i].kind == Step::Bind) read[steps_[i].slot] = false;
      for (size_t s = 0; s < read.size(); ++s)
        if (read[s]) live_in_[i].push_back(static_cast<int>(s));
      // Keep the step unmemoized when its key does not fit.
      if (static_cast<int>(live_in_[i].size()) * bits_ > 64 || steps_[i].kind != Step::Bind || i == 0)
        live_in_[i].assign(1, -1);
    }
  }

  std::uint64_t key(size_t i) const {
    std::uint64_t k = 0;
    for (int s : live_in_[i]) k = (k << bits_) | static_cast<std::uint64_t>(env_[s]);
    return k;
  }

  bool exec(size_t i) {
    if (i == steps_.size()) return true;
    if (live_in_[i].size() == 1 && live_in_[i][0] == -1) return exec_step(i);
    std::uint64_t k = key(i);
    auto& memo = memo_[i];
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    bool r = exec_step(i);
    if (memo.size() < kMemoCap) memo.emplace(k, r);
    return r;
  }

  int add_atom(const Atom& a) {
    CAtom ca{a.rel, code_.add(a.lhs, slots_), code_.add(a.rhs, slots_), {}};
    std::vector<std::string> vs;
    collect_vars(a.lhs, vs);
    collect_vars(a.rhs, vs);
    for (const auto& v : vs) ca.slots.push_back(slots_.at(v));
    atoms_.push_back(ca);
    return static_cast<int>(atoms_.size()) - 1;
  }

  bool ready(int atom, const std::vector<bool>& bound) const {
    for (int s : atoms_[atom].slots)
      if (!bound[s]) return false;
    return true;
  }

  // Orders the run's variables greedily so atoms are checked as early as possible.
  void emit_run(const std::vector<const Quant*>& run, std::vector<int> pool,
                std::vector<bool>& bound) {
    const bool exists = run.front()->exists;
    std::vector<int> vars;
    for (const Quant* q : run) {
      for (const auto& v : q->vars) vars.push_back(slots_.at(v));
      if (q->restr != Restr::None) pool.push_back(add_atom(restrictor_atom(*q)));
    }
    std::vector<int> early;
    std::vector<int> rest;
    for (int a : pool) (ready(a, bound) ? early : rest).push_back(a);
    if (!early.empty()) steps_.push_back({exists ? Step::Require : Step::Guard, -1, false, early});
    while (!vars.empty()) {
      size_t best = 0;
      int best_score = -1;
      for (size_t i = 0; i < vars.size(); ++i) {
        bound[vars[i]] = true;
        int score = 0;
        for (int a : rest) score += ready(a, bound) ? 1 : 0;
        bound[vars[i]] = false;
        if (score > best_score) {
          best_score = score;
          best = i;
        }
      }
      int v = vars[best];
      vars.erase(vars.begin() + static_cast<long>(best));
      bound[v] = true;
      Step st{Step::Bind, v, exists, {}};
      std::vector<int> still;
      for (int a : rest) (ready(a, bound) ? st.atoms : still).push_back(a);
      rest = std::move(still);
      steps_.push_back(std::move(st));
    }
  }

  bool holds(int a) const {
    const CAtom& ca = atoms_[a];
    Elem x = code_.eval(m_, env_, ca.lhs), y = code_.eval(m_, env_, ca.rhs);
    return ca.rel == Rel::Leq ? m_.lattice().leq(x, y) : m_.prec(x, y);
  }

  bool all(const std::vector<int>& as) const {
    for (int a : as)
      if (!holds(a)) return false;
    return true;
  }

  bool exec_step(size_t i) {
    const Step& st = steps_[i];
    switch (st.kind) {
    case Step::Guard: return !all(st.atoms) || exec(i + 1);
    case Step::Require: return all(st.atoms) && exec(i + 1);
    case Step::Bind: break;
    }
    const int n = m_.size();
    if (st.exists) {
      for (Elem x = 0; x < n; ++x) {
        env_[st.slot] = x;
        if (all(st.atoms) && exec(i + 1)) return true;
      }
      return false;
    }
    for (Elem x = 0; x < n; ++x) {
      env_[st.slot] = x;
      if (all(st.atoms) && !exec(i + 1)) {
        if (!witnessed_ && i < first_exists_) {
          witnessed_ = true;
          for (size_t k = 0; k <= i; ++k)
            if (steps_[k].kind == Step::Bind && !steps_[k].exists)
              witness_.emplace_back(steps_[k].slot, env_[steps_[k].slot]);
          std::sort(witness_.begin(), witness_.end());
        }
        return false;
      }
    }
    return true;
  }
};

} // namespace

CondResult eval_condition(const Model& m, const Condition& c, const EvalOptions& opt) {
  int d = quantifier_depth(c);
  if (d > opt.depth_limit)
    throw LimitError("quantifier depth " + std::to_string(d) + " exceeds limit " +
                     std::to_string(opt.depth_limit));
  Plan p(m, c);
  return p.run();
}

} // namespace subkit
