#include <algorithm>
#include <memory>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "subkit/io.hpp"
#include "subkit/parser.hpp"
#include "subkit/verifier.hpp"

using namespace subkit;

namespace {

constexpr Elem B = 0, P = 1, Q = 2, T = 3;

LatticePtr diamond() { return std::make_shared<const Lattice>(Poset({"p", "q"}, {})); }

Relation seeded(const Lattice& l, std::vector<std::pair<Elem, Elem>> pairs) {
  Relation r(l.size());
  for (auto [a, b] : pairs) r.set(a, b);
  return closure(l, r);
}

bool contains(const std::vector<Relation>& rs, const Relation& r) {
  return std::find(rs.begin(), rs.end(), r) != rs.end();
}

// Re-evaluates a counterexample with the oracle and confirms the reported disagreement.
void reverify(const EquivalenceReport& rep, const ModelCorpus& corpus, const Inequality& q,
              const Condition& c) {
  REQUIRE_FALSE(rep.equivalent);
  const Model& m = *corpus.models.at(rep.model_index).model;
  CHECK(corpus.models[rep.model_index].id == rep.model_id);
  const Lattice& l = m.lattice();
  const Relation& r = m.subordination().relation();
  CHECK(oracle::eval_inequality(l, r, q) == rep.ineq_holds);
  CHECK(oracle::eval_condition(l, r, c) == rep.cond_holds);
  CHECK(rep.ineq_holds != rep.cond_holds);
  if (!rep.ineq_holds) {
    REQUIRE(rep.lhs.has_value());
    CHECK(oracle::eval_term(l, r, rep.witness, q.lhs) == *rep.lhs);
    CHECK(oracle::eval_term(l, r, rep.witness, q.rhs) == *rep.rhs);
    CHECK_FALSE(oracle::leq(l, *rep.lhs, *rep.rhs));
  } else {
    CHECK_FALSE(oracle::eval_condition_at(l, r, c, rep.witness));
  }
}

} // namespace

TEST_CASE("exhaustive enumeration on the 2-chain yields exactly two relations") {
  Lattice l(Poset({"x"}, {}));
  auto rs = enumerate_subordinations(l, {EnumMode::Exhaustive});
  REQUIRE(rs.size() == 2);
  Relation minimal(2);
  minimal.set(0, 0);
  minimal.set(0, 1);
  minimal.set(1, 1);
  CHECK(contains(rs, minimal));
  CHECK(contains(rs, Relation::full(2)));
  CHECK(oracle::all_subordinations(l).size() == 2);
}

TEST_CASE("exhaustive enumeration matches brute-force filtering") {
  for (const auto& p : {Poset({}, {}), Poset({"x"}, {}), Poset({"p", "q"}, {}), Poset::chain(2),
                        Poset::chain(3)}) {
    Lattice l(p);
    auto rs = enumerate_subordinations(l, {EnumMode::Exhaustive});
    auto expected = oracle::all_subordinations(l);
    std::sort(expected.begin(), expected.end());
    CHECK(rs == expected);
  }
  Lattice big(Poset({"a", "b", "c"}, {}));
  CHECK_THROWS_AS(enumerate_subordinations(big, {EnumMode::Exhaustive}), LimitError);
}

TEST_CASE("closure-seeded enumeration on the diamond contains the named relations") {
  auto l = diamond();
  auto rs = enumerate_subordinations(*l, {EnumMode::ClosureSeeded});
  CHECK(contains(rs, seeded(*l, {})));
  CHECK(contains(rs, seeded(*l, {{P, Q}})));
  CHECK(contains(rs, seeded(*l, {{P, Q}, {Q, P}})));
  CHECK(contains(rs, Relation::order(*l)));
  CHECK(contains(rs, Relation::full(4)));
  auto all = enumerate_subordinations(*l, {EnumMode::Exhaustive});
  for (const auto& r : rs) {
    CHECK(oracle::is_subordination(*l, r));
    CHECK(contains(all, r));
  }
  CHECK(std::is_sorted(rs.begin(), rs.end()));
  CHECK(std::adjacent_find(rs.begin(), rs.end()) == rs.end());
}

TEST_CASE("deduplication up to automorphism keeps one relation per orbit") {
  auto l = diamond();
  auto autos = lattice_automorphisms(*l);
  CHECK(autos.size() == 2);
  EnumOptions opt{EnumMode::ClosureSeeded};
  auto all = enumerate_subordinations(*l, opt);
  opt.up_to_iso = true;
  auto reps = enumerate_subordinations(*l, opt);
  CHECK(reps.size() < all.size());
  auto image = [&](const Relation& r, const std::vector<Elem>& f) {
    Relation out(r.n);
    for (auto [a, b] : r.pairs()) out.set(f[a], f[b]);
    return out;
  };
  for (const auto& r : all) {
    int hits = 0;
    for (const auto& rep : reps)
      for (const auto& f : autos)
        if (image(rep, f) == r) {
          ++hits;
          break;
        }
    CHECK(hits == 1);
  }
  CHECK(lattice_automorphisms(Lattice(Poset::chain(3))).size() == 1);
}

TEST_CASE("sampled enumeration is reproducible from its seed") {
  Lattice l(random_poset(5, 0.5, 3));
  EnumOptions opt{EnumMode::Sampled, 25, 42};
  auto a = enumerate_subordinations(l, opt);
  auto b = enumerate_subordinations(l, opt);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  for (const auto& r : a) CHECK(oracle::is_subordination(l, r));
  opt.seed = 43;
  auto c = enumerate_subordinations(l, opt);
  for (const auto& r : c) CHECK(is_subordination(l, r));
  CHECK(random_poset(6, 0.5, 9).names() == random_poset(6, 0.5, 9).names());
}

TEST_CASE("fast closure agrees with the saturating closure") {
  std::mt19937 rng(3);
  for (int k = 0; k < 30; ++k) {
    Lattice l(random_poset(3 + k % 3, 0.4, 100 + k));
    const int n = l.size();
    Relation seed(n);
    for (int i = 0; i < 3; ++i) seed.set(static_cast<Elem>(rng() % n), static_cast<Elem>(rng() % n));
    CHECK(fast_closure(l, seed) == closure(l, seed));
    CHECK(is_subordination(l, fast_closure(l, seed)) == true);
  }
}

TEST_CASE("posets up to isomorphism") {
  const std::vector<size_t> counts = {1, 1, 2, 5, 16, 63};
  for (int n = 0; n < 6; ++n) CHECK(posets_up_to_iso(n).size() == counts[n]);
}

TEST_CASE("default corpus composition") {
  ModelCorpus small = small_corpus();
  CHECK(small.models.size() == 45);
  ModelCorpus full = default_corpus();
  CHECK(full.models.size() > 4000);
  std::set<std::string> ids;
  for (const auto& m : full.models) {
    ids.insert(m.id);
    const Model& mm = *m.model;
    CHECK(validate_subordination(mm.lattice(), mm.subordination().relation()).empty());
  }
  CHECK(ids.size() == full.models.size());
  ModelCorpus again = default_corpus();
  REQUIRE(again.models.size() == full.models.size());
  for (size_t i = 0; i < full.models.size(); i += 97) CHECK(again.models[i].id == full.models[i].id);
}

TEST_CASE("transitivity axiom against its condition on the diamond") {
  auto l = diamond();
  ModelCorpus corpus;
  for (const auto& r : enumerate_subordinations(*l, {EnumMode::Exhaustive}))
    corpus.add(l, r, "diamond");
  Inequality q = parse_inequality("top -> (top -> c) <= top -> c");
  Condition c = parse_condition("a prec b & b prec c ==> a prec c");
  EquivalenceReport rep = check_equivalence(q, c, corpus);
  CHECK(rep.equivalent);
  CHECK(rep.models_checked == corpus.models.size());

  // An extra antecedent conjunct that the failing triple (p, q, p) violates.
  Condition weak = parse_condition("a prec b & b prec c & a <= b ==> a prec c");
  Model m2(SubordinationRelation(l, seeded(*l, {{P, Q}, {Q, P}})));
  ModelCorpus only2 = single_model_corpus(m2, "prec2");
  EquivalenceReport cx = check_equivalence(q, weak, only2);
  CHECK_FALSE(cx.equivalent);
  CHECK(cx.model_id == "prec2");
  CHECK_FALSE(cx.ineq_holds);
  CHECK(cx.cond_holds);
  CHECK(cx.witness == Assignment{{"c", P}});
  reverify(cx, only2, q, weak);
  EquivalenceReport first = check_equivalence(q, weak, corpus);
  reverify(first, corpus, q, weak);
}

TEST_CASE("negation of top against non-contradiction on every small model") {
  Inequality a = parse_inequality("neg top <= bot");
  Inequality b = parse_inequality("a /\\ neg a <= bot");
  for (const auto& cm : default_corpus({kDefaultSeed, 40, false}).models)
    CHECK(eval_inequality(*cm.model, a).holds == eval_inequality(*cm.model, b).holds);
  EquivalenceReport rep = check_equivalence(a, parse_condition("a prec bot ==> a <= bot"), small_corpus());
  CHECK(rep.equivalent);
}

TEST_CASE("counterexamples re-verify for random mismatched pairs") {
  auto suite = suite_from_json(read_json_file(SUBKIT_TEST_DATA "/regression_suite.json"));
  ModelCorpus small = small_corpus();
  int found = 0;
  for (size_t i = 0; i < suite.size(); ++i)
    for (size_t j = 0; j < suite.size(); ++j) {
      if (i == j) continue;
      Inequality q = parse_inequality(suite[i].ineq);
      Condition c = parse_condition(suite[j].cond);
      if (quantifier_depth(c) > 4) continue;
      EquivalenceReport rep = check_equivalence(q, c, small);
      if (rep.equivalent) continue;
      CAPTURE(suite[i].name);
      CAPTURE(suite[j].name);
      reverify(rep, small, q, c);
      ++found;
    }
  CHECK(found > 50);
}

TEST_CASE("first disagreement is reported in corpus order") {
  ModelCorpus small = small_corpus();
  Inequality q = parse_inequality("top -> (top -> c) <= top -> c");
  Condition c = parse_condition("a prec b ==> a prec c");
  EquivalenceReport rep = check_equivalence(q, c, small);
  REQUIRE_FALSE(rep.equivalent);
  for (size_t i = 0; i < rep.model_index; ++i) {
    const Model& m = *small.models[i].model;
    CHECK(eval_inequality(m, q).holds == eval_condition(m, c).holds);
  }
  CHECK(rep.models_checked == rep.model_index + 1);
}

TEST_CASE("regression runs flag exactly the mutated pair") {
  CorpusOptions opt;
  opt.samples = 20;
  opt.closure_seeded = false;
  ModelCorpus corpus = default_corpus(opt);
  auto results =
      run_regression(suite_from_json(read_json_file(SUBKIT_TEST_DATA "/mutated_suite.json")), corpus);
  REQUIRE(results.size() == 4);
  for (const auto& r : results) CHECK(r.pass() == (r.name != "CT-mutated"));
  CHECK(print_report(results[2].report, corpus).rfind("counterexample in model ", 0) == 0);
  CHECK(print_report(results[0].report, corpus) ==
        "equivalent on " + std::to_string(corpus.models.size()) + " models");

  CHECK(run_regression(suite_from_json(read_json_file(SUBKIT_TEST_DATA "/empty_suite.json")), corpus)
            .empty());
  auto bad = run_regression({{"broken", "a <= ", "a <= a"}}, corpus);
  REQUIRE(bad.size() == 1);
  CHECK_FALSE(bad[0].pass());
  CHECK_FALSE(bad[0].error.empty());
}

TEST_CASE("round-trip and residuation laws on the sampled corpus") {
  ModelCorpus corpus = default_corpus({kDefaultSeed, 60, false});
  for (const auto& cm : corpus.models) {
    const Model& m = *cm.model;
    const Lattice& l = m.lattice();
    const auto& s = m.subordination();
    auto alg = to_slanted(s);
    CHECK(validate_slanted(alg).empty());
    CHECK(to_subordination(alg).relation() == s.relation());
    for (Elem a = 0; a < l.size(); ++a)
      for (Elem b = 0; b < l.size(); ++b) {
        CHECK(l.leq(a, m.imp(l.top(), b)) == s.prec(a, b));
        CHECK(l.leq(m.coimp(l.bot(), a), b) == s.prec(a, b));
      }
  }
}

TEST_CASE("model JSON round trip") {
  for (const auto& sm : oracle::small_models()) {
    const Lattice& l = *sm.lattice;
    json j = relation_to_json(l, sm.rel);
    for (const auto& pair : j) {
      REQUIRE(pair.is_array());
      REQUIRE(pair.size() == 2);
      CHECK(pair[0].is_array());
    }
    CHECK(relation_from_json(l, j) == sm.rel);
    for (Elem x = 0; x < l.size(); ++x) CHECK(elem_from_json(l, elem_to_json(l, x)) == x);
    json model = {{"poset", poset_to_json(l.base())}, {"subordination", j}, {"closed", true}};
    Model m = build_model(model_spec_from_json(model));
    CHECK(m.subordination().relation() == sm.rel);
  }
  auto l = diamond();
  CHECK(elem_from_json(*l, "bot") == B);
  CHECK(elem_from_json(*l, "top") == T);
  CHECK(elem_from_json(*l, "p") == P);
  CHECK(elem_from_json(*l, json::array({"q", "p"})) == T);
  CHECK_THROWS_AS(elem_from_json(*l, "z"), Error);
  json bad = {{"poset", poset_to_json(l->base())},
              {"subordination", json::array({json::array({"bot", "bot"}), json::array({"top", "top"})})},
              {"closed", true}};
  CHECK_THROWS_AS(build_model(model_spec_from_json(bad)), Error);
  bad["closed"] = false;
  CHECK(build_model(model_spec_from_json(bad)).subordination().relation() == closure(*l, Relation(4)));
}
