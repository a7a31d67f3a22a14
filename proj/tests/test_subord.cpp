#include <algorithm>
#include <memory>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "subkit/subord.hpp"

using namespace subkit;

namespace {

// Diamond: bot=0, p=1, q=2, top=3.
constexpr Elem B = 0, P = 1, Q = 2, T = 3;

LatticePtr diamond() { return std::make_shared<const Lattice>(Poset({"p", "q"}, {})); }

Relation rel(int n, std::vector<std::pair<Elem, Elem>> pairs) {
  Relation r(n);
  for (auto [a, b] : pairs) r.set(a, b);
  return r;
}

Relation prec_min() { return rel(4, {{B, B}, {B, P}, {B, Q}, {B, T}, {P, T}, {Q, T}, {T, T}}); }
Relation prec1() {
  Relation r = prec_min();
  r.set(P, Q);
  return r;
}
Relation prec2() {
  Relation r = prec1();
  r.set(Q, P);
  return r;
}

bool has_violation(const std::vector<Violation>& vs, const std::string& rule,
                   const std::string& witness) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.rule == rule && v.witness.find(witness) != std::string::npos;
  });
}

} // namespace

TEST_CASE("validator accepts the order and the full relation") {
  auto l = diamond();
  CHECK(validate_subordination(*l, Relation::order(*l)).empty());
  CHECK(validate_subordination(*l, Relation::full(4)).empty());
  auto vs = validate_subordination(*l, rel(4, {{B, B}, {T, T}}));
  CHECK(has_violation(vs, "WO-SI", "bot <= bot prec bot <= p"));
  CHECK_THROWS_AS(validate_subordination(*l, Relation(3)), Error);
}

TEST_CASE("validator agrees with the axioms on random relations") {
  std::mt19937 rng(7);
  for (const auto& p : {Poset({"p", "q"}, {}), Poset::chain(2), Poset({"a", "b", "c"}, {{"a", "c"}})}) {
    Lattice l(p);
    const int n = l.size();
    for (int k = 0; k < 300; ++k) {
      Relation r(n);
      for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
          if (rng() % 3 != 0) r.set(a, b);
      CHECK(validate_subordination(l, r).empty() == oracle::is_subordination(l, r));
    }
  }
}

TEST_CASE("closure examples on the diamond") {
  auto l = diamond();
  CHECK(closure(*l, Relation(4)) == prec_min());
  CHECK(closure(*l, rel(4, {{P, Q}})) == prec1());
  Relation two = closure(*l, rel(4, {{P, Q}, {Q, P}}));
  CHECK(two == prec2());
  CHECK_FALSE(two.get(P, P));
}

TEST_CASE("closure is the least subordination relation above the seed") {
  for (const auto& p : {Poset({"p", "q"}, {}), Poset::chain(2), Poset::chain(1)}) {
    Lattice l(p);
    const int n = l.size();
    auto all = oracle::all_subordinations(l);
    std::mt19937 rng(11);
    for (int k = 0; k < 60; ++k) {
      Relation seed(n);
      for (int i = 0; i < 2; ++i) seed.set(static_cast<Elem>(rng() % n), static_cast<Elem>(rng() % n));
      Relation c = closure(l, seed);
      CHECK(oracle::is_subordination(l, c));
      for (Elem a = 0; a < n; ++a)
        for (Elem b = 0; b < n; ++b)
          if (seed.get(a, b)) CHECK(c.get(a, b));
      for (const auto& s : all) {
        bool above = true;
        for (Elem a = 0; a < n; ++a)
          for (Elem b = 0; b < n; ++b)
            if (seed.get(a, b) && !s.get(a, b)) above = false;
        if (!above) continue;
        for (Elem a = 0; a < n; ++a)
          for (Elem b = 0; b < n; ++b)
            if (c.get(a, b)) CHECK(s.get(a, b));
      }
      CHECK(closure(l, c) == c);
    }
  }
}

TEST_CASE("closure of the empty seed is bot x A union A x top") {
  for (const auto& m : oracle::small_models()) {
    const Lattice& l = *m.lattice;
    Relation c = closure(l, Relation(l.size()));
    for (Elem a = 0; a < l.size(); ++a)
      for (Elem b = 0; b < l.size(); ++b) CHECK(c.get(a, b) == (a == l.bot() || b == l.top()));
  }
}

TEST_CASE("slanted operators on the diamond") {
  auto l = diamond();
  SubordinationRelation s1(l, prec1());
  CHECK(slanted_imp(s1, P, Q) == T);
  CHECK(slanted_imp(s1, Q, P) == P);
  CHECK(slanted_coimp(s1, P, Q) == Q);
  CHECK(slanted_coimp(s1, Q, P) == B);
  CHECK(neg(s1, P) == Q);
  CHECK(neg(s1, Q) == P);
  CHECK(sim(s1, P) == Q);
  CHECK(sim(s1, B) == T);
  CHECK(circ(s1, P, T) == Q);
  SubordinationRelation smin(l, prec_min());
  CHECK(circ(smin, T, T) == T);
  CHECK_THROWS_AS(SubordinationRelation(l, rel(4, {{B, B}, {T, T}})), Error);
}

TEST_CASE("boundary values of the operators") {
  for (const auto& m : oracle::small_models()) {
    SubordinationRelation s(m.lattice, m.rel);
    const Lattice& l = *m.lattice;
    for (Elem a = 0; a < l.size(); ++a) {
      CHECK(slanted_imp(s, l.bot(), a) == l.top());
      CHECK(slanted_imp(s, a, l.top()) == l.top());
      CHECK(slanted_coimp(s, l.top(), a) == l.bot());
      CHECK(slanted_coimp(s, a, l.bot()) == l.bot());
      CHECK(circ(s, a, l.bot()) == l.bot());
    }
    CHECK(neg(s, l.bot()) == l.top());
  }
}

TEST_CASE("operators agree with the residuation oracles") {
  for (const auto& m : oracle::small_models()) {
    SubordinationRelation s(m.lattice, m.rel);
    Model model(s);
    const Lattice& l = *m.lattice;
    const int n = l.size();
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        CHECK(slanted_imp(s, a, b) == oracle::imp(l, m.rel, a, b));
        CHECK(slanted_coimp(s, a, b) == oracle::coimp(l, m.rel, a, b));
        CHECK(circ(s, a, b) == oracle::circ(l, m.rel, a, b));
        CHECK(model.imp(a, b) == slanted_imp(s, a, b));
        CHECK(model.coimp(a, b) == slanted_coimp(s, a, b));
      }
  }
}

TEST_CASE("residuation, Galois and monotonicity laws") {
  for (const auto& m : oracle::small_models()) {
    SubordinationRelation s(m.lattice, m.rel);
    const Lattice& l = *m.lattice;
    const int n = l.size();
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) {
        CHECK(l.leq(a, neg(s, b)) == l.leq(b, neg(s, a)));
        CHECK(l.leq(sim(s, a), b) == l.leq(sim(s, b), a));
        CHECK(l.leq(a, neg(s, b)) == s.prec(l.meet(a, b), l.bot()));
        CHECK(l.leq(sim(s, a), b) == s.prec(l.top(), l.join(b, a)));
        CHECK(neg(s, a) == slanted_imp(s, a, l.bot()));
        CHECK(sim(s, a) == slanted_coimp(s, a, l.top()));
        for (Elem c = 0; c < n; ++c) {
          CHECK(l.leq(c, slanted_imp(s, a, b)) == s.prec(l.meet(a, c), b));
          CHECK(l.leq(slanted_coimp(s, a, b), c) == s.prec(b, l.join(a, c)));
          CHECK(l.leq(c, slanted_imp(s, a, b)) ==
                l.leq(l.meet(c, a), slanted_imp(s, l.top(), b)));
          CHECK(l.leq(b, slanted_imp(s, a, c)) == l.leq(circ(s, a, b), c));
          if (l.leq(a, b)) {
            CHECK(l.leq(slanted_imp(s, b, c), slanted_imp(s, a, c)));
            CHECK(l.leq(slanted_imp(s, c, a), slanted_imp(s, c, b)));
            CHECK(l.leq(slanted_coimp(s, b, c), slanted_coimp(s, a, c)));
            CHECK(l.leq(slanted_coimp(s, c, a), slanted_coimp(s, c, b)));
          }
        }
      }
  }
}

TEST_CASE("round trips through slanted algebras") {
  auto l = diamond();
  SubordinationRelation s1(l, prec1());
  CHECK(to_subordination(to_slanted(s1)).relation() == prec1());
  CHECK(slanted_imp(s1, T, Q) == P);
  for (const auto& m : oracle::small_models()) {
    SubordinationRelation s(m.lattice, m.rel);
    auto alg = to_slanted(s);
    CHECK(validate_slanted(alg).empty());
    CHECK(to_subordination(alg).relation() == m.rel);
    SlantedAlgebra only_imp{alg.lat, alg.imp, std::nullopt};
    SlantedAlgebra only_co{alg.lat, std::nullopt, alg.coimp};
    CHECK(to_subordination(only_imp).relation() == m.rel);
    CHECK(to_subordination(only_co).relation() == m.rel);
  }
}

TEST_CASE("classical table on the 2-chain with the order") {
  auto l = std::make_shared<const Lattice>(Poset({"x"}, {}));
  SubordinationRelation s(l, Relation::order(*l));
  CHECK(slanted_imp(s, 1, 0) == 0);
  CHECK(slanted_imp(s, 0, 0) == 1);
  CHECK(slanted_imp(s, 0, 1) == 1);
  CHECK(slanted_imp(s, 1, 1) == 1);
}

TEST_CASE("validate_slanted reports mutated tables") {
  auto l = diamond();
  auto alg = to_slanted(SubordinationRelation(l, prec1()));
  auto bad = alg;
  (*bad.imp)[P * 4 + Q] = B;
  auto vs = validate_slanted(bad);
  CHECK(has_violation(vs, "imp-4", "(p, q, top)"));
  CHECK_THROWS_AS(to_subordination(bad), Error);

  auto meet_broken = alg;
  (*meet_broken.imp)[T * 4 + B] = P; // top -> bot no longer the meet of top -> p and top -> q
  CHECK(has_violation(validate_slanted(meet_broken), "imp-2", ""));

  // imp from prec1 with coimp from prec2 induce different relations.
  auto other = to_slanted(SubordinationRelation(l, prec2()));
  SlantedAlgebra mixed{l, alg.imp, other.coimp};
  CHECK_THROWS_WITH_AS(to_subordination(mixed), doctest::Contains("different"), Error);
  SlantedAlgebra none{l, std::nullopt, std::nullopt};
  CHECK_FALSE(validate_slanted(none).empty());
}
