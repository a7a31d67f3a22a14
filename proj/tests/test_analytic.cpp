#include <fstream>
#include <functional>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "subkit/analytic.hpp"
#include "subkit/io.hpp"
#include "subkit/parser.hpp"

using namespace subkit;

namespace {

// Signed connective table, written out row by row.
unsigned table(Op op, bool pos) {
  switch (op) {
  case Op::Or: return pos ? (kDelta | kSRR) : (kSLR | kSRA);
  case Op::And: return pos ? (kSLR | kSRA) : (kDelta | kSRR);
  case Op::Imp: return pos ? kSRR : kSLR;
  case Op::CoImp: return pos ? kSLR : kSRR;
  case Op::Neg: return pos ? (kSLR | kSRA) : 0;
  case Op::Sim: return pos ? 0 : (kSLR | kSRA);
  default: return 0;
  }
}

Term expand(const Term& t, bool pos) {
  if (!t || t->op == Op::Var || t->op == Op::Bot || t->op == Op::Top) return t;
  if (t->op == Op::Neg && !pos) return mk_imp(expand(t->l, true), bot());
  if (t->op == Op::Sim && pos) return mk_coimp(expand(t->l, false), top());
  bool flip_first = t->op == Op::Imp || t->op == Op::CoImp || t->op == Op::Neg || t->op == Op::Sim;
  Term l = expand(t->l, flip_first ? !pos : pos);
  if (!t->r) return t->op == Op::Neg ? mk_neg(l) : mk_sim(l);
  Term r = expand(t->r, pos);
  switch (t->op) {
  case Op::And: return mk_and(l, r);
  case Op::Or: return mk_or(l, r);
  case Op::Imp: return mk_imp(l, r);
  default: return mk_coimp(l, r);
  }
}

// Every branch good: some split with Skeleton classes above and PIA classes below.
bool oracle_analytic(const Inequality& q) {
  bool ok = true;
  std::function<void(const Term&, bool, std::vector<unsigned>&)> walk =
      [&](const Term& t, bool pos, std::vector<unsigned>& path) {
        if (!t->l) {
          bool good = false;
          for (size_t k = 0; k <= path.size() && !good; ++k) {
            bool g = true;
            for (size_t i = 0; i < path.size(); ++i)
              g = g && (path[i] & (i < k ? kSkeleton : kPIA)) != 0;
            good = g;
          }
          ok = ok && good;
          return;
        }
        path.push_back(table(t->op, pos));
        bool flip_first = t->op == Op::Imp || t->op == Op::CoImp || t->op == Op::Neg || t->op == Op::Sim;
        walk(t->l, flip_first ? !pos : pos, path);
        if (t->r) walk(t->r, pos, path);
        path.pop_back();
      };
  std::vector<unsigned> path;
  walk(expand(q.lhs, true), true, path);
  walk(expand(q.rhs, false), false, path);
  return ok;
}

Term rename_all(const Term& t, const std::string& suffix) {
  std::vector<std::string> vs;
  collect_vars(t, vs);
  Term out = t;
  for (const auto& v : vs) out = rename(out, v, v + suffix);
  return out;
}

Term swap_lattice_ops(const Term& t) {
  if (!t || !t->l) return t;
  Term l = swap_lattice_ops(t->l), r = swap_lattice_ops(t->r);
  switch (t->op) {
  case Op::And: return mk_and(r, l);
  case Op::Or: return mk_or(r, l);
  case Op::Imp: return mk_imp(l, r);
  case Op::CoImp: return mk_coimp(l, r);
  case Op::Neg: return mk_neg(l);
  default: return mk_sim(l);
  }
}

} // namespace

TEST_CASE("connective classes follow the table") {
  for (Op op : {Op::And, Op::Or, Op::Imp, Op::CoImp, Op::Neg, Op::Sim})
    for (bool pos : {true, false}) CHECK(node_classes(op, pos) == table(op, pos));
  CHECK(node_classes(Op::Var, true) == 0);
  CHECK(class_names(kSLR | kSRA) == "SLR|SRA");
}

TEST_CASE("signed tree examples") {
  SignedNode leaf = signed_tree(var("a"), true);
  CHECK(leaf.op == Op::Var);
  CHECK(leaf.positive);
  CHECK(leaf.children.empty());

  SignedNode root = signed_tree(parse_term("(a -> b) /\\ (b -> c)"), true);
  CHECK(root.classes == (kSLR | kSRA));
  REQUIRE(root.children.size() == 2);
  for (const auto& ch : root.children) {
    CHECK(ch.op == Op::Imp);
    CHECK(ch.positive);
    CHECK(ch.classes == kSRR);
  }

  SignedNode neg_imp = signed_tree(parse_term("a -> c"), false);
  CHECK(neg_imp.classes == kSLR);
  CHECK(neg_imp.children[0].positive);
  CHECK_FALSE(neg_imp.children[1].positive);

  SignedNode raw = signed_tree(parse_term("neg a"), false, false);
  CHECK(raw.unclassified);
  SignedNode expanded = signed_tree(parse_term("neg a"), false, true);
  CHECK(expanded.op == Op::Imp);
  CHECK_FALSE(expanded.unclassified);
  CHECK(expanded.children[1].op == Op::Bot);
}

TEST_CASE("regression inequalities are analytic") {
  auto suite = suite_from_json(read_json_file(SUBKIT_TEST_DATA "/regression_suite.json"));
  CHECK(suite.size() == 14);
  for (const auto& e : suite) {
    CAPTURE(e.name);
    AnalyticVerdict v = is_analytic(parse_inequality(e.ineq));
    CHECK(v.analytic);
    CHECK(v.offending().empty());
    for (const auto& b : v.branches) CHECK(b.good());
  }
}

TEST_CASE("Frege is analytic with explicit splits") {
  AnalyticVerdict v = is_analytic(parse_inequality("a -> (b -> c) <= (a -> b) -> (a -> c)"));
  CHECK(v.analytic);
  CHECK(v.native_analytic);
  CHECK(v.branches.size() == 7);
}

TEST_CASE("a Skeleton-only node below a PIA-only node is rejected") {
  AnalyticVerdict v = is_analytic(parse_inequality("a -> (b >- c) <= d"));
  CHECK_FALSE(v.analytic);
  auto bad = v.offending();
  REQUIRE_FALSE(bad.empty());
  bool found_c = false;
  for (const auto& b : bad) {
    CHECK(b.from_lhs);
    REQUIRE(b.path.size() == 2);
    CHECK(b.classes[0] == kSRR);
    CHECK(b.classes[1] == kSLR);
    if (b.leaf == "c") found_c = true;
    CHECK(print_branch(b).find("(bad)") != std::string::npos);
  }
  CHECK(found_c);
}

TEST_CASE("unclassified negations are analytic only after expansion") {
  AnalyticVerdict v = is_analytic(parse_inequality("sim a <= b"));
  CHECK(v.analytic);
  CHECK_FALSE(v.native_analytic);
}

TEST_CASE("verdict agrees with the split oracle on random inequalities") {
  std::mt19937 rng(31);
  const std::vector<std::string> vars = {"a", "b", "c"};
  int analytic = 0;
  for (int i = 0; i < 4000; ++i) {
    Inequality q{oracle::random_term(rng, 3, vars, true), oracle::random_term(rng, 3, vars, true)};
    CAPTURE(print_inequality(q));
    bool v = is_analytic(q).analytic;
    CHECK(v == oracle_analytic(q));
    analytic += v;
  }
  CHECK(analytic > 100);
  CHECK(analytic < 3900);
}

TEST_CASE("verdict is invariant under renaming and lattice commutativity") {
  std::mt19937 rng(8);
  const std::vector<std::string> vars = {"a", "b", "c", "d"};
  for (int i = 0; i < 2000; ++i) {
    Inequality q{oracle::random_term(rng, 4, vars, true), oracle::random_term(rng, 4, vars, true)};
    bool v = is_analytic(q).analytic;
    CHECK(is_analytic({rename_all(q.lhs, "x"), rename_all(q.rhs, "x")}).analytic == v);
    CHECK(is_analytic({swap_lattice_ops(q.lhs), swap_lattice_ops(q.rhs)}).analytic == v);
  }
}

TEST_CASE("pure lattice inequalities are always analytic") {
  std::mt19937 rng(4);
  const std::vector<std::string> vars = {"a", "b", "c"};
  for (int i = 0; i < 1000; ++i) {
    Inequality q{oracle::random_term(rng, 5, vars, false), oracle::random_term(rng, 5, vars, false)};
    CHECK(is_analytic(q).analytic);
  }
}
