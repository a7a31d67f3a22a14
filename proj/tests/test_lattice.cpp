#include <algorithm>
#include <cstdlib>
#include <iterator>

#include "doctest.h"
#include "oracles.hpp"
#include "subkit/lattice.hpp"

using namespace subkit;

namespace {
Poset diamond_poset() { return Poset({"p", "q"}, {}); }
Poset chain2() { return Poset({"x", "y"}, {{"x", "y"}}); }

std::vector<Poset> sample_posets() {
  return {Poset({}, {}),
          Poset({"x"}, {}),
          diamond_poset(),
          chain2(),
          Poset::chain(3),
          Poset::antichain(3),
          Poset({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}}),
          Poset({"a", "b", "c", "d"}, {{"a", "c"}, {"b", "c"}, {"b", "d"}}),
          Poset::antichain(4)};
}
} // namespace

TEST_CASE("poset construction validates the order") {
  CHECK_NOTHROW(Poset({"a", "b"}, {{"a", "a"}, {"a", "b"}}));
  CHECK_THROWS_AS(Poset({"a", "b"}, {{"a", "b"}, {"b", "a"}}), Error);          // antisymmetry
  CHECK_THROWS_AS(Poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}), Error);     // transitivity
  CHECK_THROWS_AS(Poset({"a", "b"}, {{"a", "z"}}), Error);                      // unknown name
  CHECK_THROWS_AS(Poset({"a", "a"}, {}), Error);                                // duplicate
  Poset p({"a", "b"}, {{"a", "b"}});
  CHECK(p.leq(0, 0));
  CHECK(p.leq(0, 1));
  CHECK_FALSE(p.leq(1, 0));
  CHECK(p.index_of("b") == 1);
  CHECK(p.index_of("zz") == -1);
}

TEST_CASE("downset lattices of small posets") {
  Lattice one(Poset({"x"}, {}));
  CHECK(one.size() == 2);
  Lattice d(diamond_poset());
  REQUIRE(d.size() == 4);
  CHECK(d.mask(d.bot()) == 0);
  CHECK(d.mask(d.top()) == 3);
  CHECK(d.label(1) == "p");
  CHECK(d.label(2) == "q");
  CHECK(d.meet(1, 2) == d.bot());
  CHECK(d.join(1, 2) == d.top());
  CHECK(d.leq(1, d.top()));
  CHECK(d.members(d.top()) == std::vector<std::string>{"p", "q"});
  Lattice c3(chain2());
  REQUIRE(c3.size() == 3);
  CHECK(c3.leq(1, 2));
  CHECK(c3.members(1) == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(d.meet(0, 9), Error);
}

TEST_CASE("elements are exactly the downsets, in mask order") {
  for (const auto& p : sample_posets()) {
    Lattice l(p);
    auto expected = oracle::downsets(p);
    REQUIRE(static_cast<size_t>(l.size()) == expected.size());
    for (Elem x = 0; x < l.size(); ++x) CHECK(l.mask(x) == expected[x]);
  }
}

TEST_CASE("lattice laws hold exhaustively") {
  for (const auto& p : sample_posets()) {
    Lattice l(p);
    const int n = l.size();
    for (Elem x = 0; x < n; ++x) {
      CHECK(l.join(x, l.bot()) == x);
      CHECK(l.meet(x, l.top()) == x);
      for (Elem y = 0; y < n; ++y) {
        CHECK(l.meet(x, y) == oracle::meet(l, x, y));
        CHECK(l.join(x, y) == oracle::join(l, x, y));
        CHECK(l.meet(x, y) == l.meet(y, x));
        CHECK(l.join(x, l.meet(x, y)) == x);
        CHECK(l.meet(x, l.join(x, y)) == x);
        CHECK(l.leq(x, y) == (l.meet(x, y) == x));
        CHECK(l.leq(x, y) == (l.join(x, y) == y));
        for (Elem z = 0; z < n; ++z) {
          CHECK(l.meet(x, l.join(y, z)) == l.join(l.meet(x, y), l.meet(x, z)));
          CHECK(l.meet(x, l.meet(y, z)) == l.meet(l.meet(x, y), z));
          CHECK(l.join(x, l.join(y, z)) == l.join(l.join(x, y), z));
        }
      }
    }
    CHECK(l.meet_all({}) == l.top());
    CHECK(l.join_all({}) == l.bot());
  }
}

TEST_CASE("irreducible cap") {
  CHECK(default_max_irreducibles() == 6);
  CHECK_NOTHROW(Lattice(Poset::antichain(6)));
  CHECK_THROWS_AS(Lattice(Poset::antichain(7)), LimitError);
  CHECK_NOTHROW(Lattice(Poset::antichain(7), 7));
  CHECK_THROWS_AS(Lattice(Poset::antichain(3), 2), LimitError);
}

TEST_CASE("environment cap and flag override") {
  setenv("SUBKIT_MAX_ELEMS", "3", 1);
  CHECK(default_max_irreducibles() == 3);
  CHECK_THROWS_AS(Lattice(Poset::antichain(4)), LimitError);
  set_max_irreducibles(5);
  CHECK(default_max_irreducibles() == 5);
  CHECK_NOTHROW(Lattice(Poset::antichain(4)));
  CHECK_THROWS_AS(set_max_irreducibles(0), Error);
}

TEST_CASE("closed and open elements of embeddings") {
  Lattice d(diamond_poset());
  auto id = LatticeEmbedding::identity(d);
  std::vector<Elem> all = {0, 1, 2, 3};
  CHECK(closed_elements(id) == all);
  CHECK(open_elements(id) == all);

  Lattice two(Poset({"x"}, {}));
  LatticeEmbedding bt(two, d, {d.bot(), d.top()});
  CHECK(closed_elements(bt) == std::vector<Elem>{0, 3});
  CHECK(open_elements(bt) == std::vector<Elem>{0, 3});
  CHECK_FALSE(is_dense(bt));
  CHECK(is_compact(bt));
  auto rep = check_canext_props(bt);
  CHECK_FALSE(rep.precondition_ok);
  CHECK(rep.diagnostic.find("dense") != std::string::npos);

  Lattice c3(chain2());
  LatticeEmbedding via_p(c3, d, {0, 1, 3});
  CHECK(closed_elements(via_p) == std::vector<Elem>{0, 1, 3});
  CHECK_FALSE(is_dense(via_p));

  CHECK_THROWS_AS(LatticeEmbedding(c3, d, {0, 1, 2}), Error); // loses top
  CHECK_THROWS_AS(LatticeEmbedding(d, c3, {0, 1, 1, 2}), Error);
}

TEST_CASE("closed and open elements intersect in the image") {
  Lattice d(diamond_poset());
  Lattice four(Poset::chain(3));
  Lattice two(Poset({"x"}, {}));
  Lattice c3(chain2());
  std::vector<LatticeEmbedding> es = {LatticeEmbedding::identity(d),
                                      LatticeEmbedding(two, d, {0, 3}),
                                      LatticeEmbedding(c3, d, {0, 2, 3}),
                                      LatticeEmbedding(c3, four, {0, 2, 3}),
                                      LatticeEmbedding(two, four, {0, 3})};
  for (const auto& e : es) {
    auto K = closed_elements(e), O = open_elements(e);
    std::vector<Elem> both;
    std::set_intersection(K.begin(), K.end(), O.begin(), O.end(), std::back_inserter(both));
    CHECK(both == e.image());
  }
}

TEST_CASE("canonical extension properties on identity embeddings") {
  for (const auto& p : sample_posets()) {
    Lattice l(p);
    auto id = LatticeEmbedding::identity(l);
    CHECK(is_dense(id));
    CHECK(is_compact(id));
    auto rep = check_canext_props(id);
    CHECK(rep.precondition_ok);
    CHECK(rep.all_pass());
    CHECK(!rep.items.empty());
    for (const auto& it : rep.items) CHECK_MESSAGE(it.pass, it.item << ": " << it.witness);
  }
}
