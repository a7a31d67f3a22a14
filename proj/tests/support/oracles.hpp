#pragma once
// Independent reference implementations used as test oracles. They follow the textbook
// definitions directly and share no code paths with the library beyond the data types.

#include <random>
#include <string>
#include <vector>

#include "subkit/eval.hpp"
#include "subkit/subord.hpp"
#include "subkit/term.hpp"

namespace oracle {

using namespace subkit;

// All downsets of p as masks, by brute force over subsets, in increasing mask order.
std::vector<Mask> downsets(const Poset& p);

Elem meet(const Lattice& l, Elem a, Elem b); // via mask intersection
Elem join(const Lattice& l, Elem a, Elem b); // via mask union
bool leq(const Lattice& l, Elem a, Elem b);

// The four axioms checked literally over all tuples.
bool is_subordination(const Lattice& l, const Relation& r);
// Every subordination relation on l, by filtering all 2^(n*n) candidates.
std::vector<Relation> all_subordinations(const Lattice& l);

// Greatest c with a/\c prec b; -1 if the set has no greatest element.
Elem imp(const Lattice& l, const Relation& r, Elem a, Elem b);
// Least c with b prec a\/c; -1 if none.
Elem coimp(const Lattice& l, const Relation& r, Elem a, Elem b);
// Least w with v <= imp(u, w); -1 if none.
Elem circ(const Lattice& l, const Relation& r, Elem u, Elem v);

Elem eval_term(const Lattice& l, const Relation& r, const Assignment& env, const Term& t);
bool eval_inequality(const Lattice& l, const Relation& r, const Inequality& q);
// Quantifier by quantifier, in the written order, with restrictors expanded.
bool eval_condition(const Lattice& l, const Relation& r, const Condition& c);
// As above with the universal variables in `fixed` pinned to the given values.
bool eval_condition_at(const Lattice& l, const Relation& r, const Condition& c,
                       const Assignment& fixed);

// Equality up to renaming of bound variables, order of conjuncts, and order of the
// operands of /\ and \/. Both sides must have the form forall* [ant ==>] exists* cons.
bool alpha_equivalent(const Condition& a, const Condition& b);

// Small models: every subordination relation on every lattice with at most 4 elements.
struct SmallModel {
  LatticePtr lattice;
  Relation rel;
};
std::vector<SmallModel> small_models();

Term random_term(std::mt19937& rng, int depth, const std::vector<std::string>& vars, bool slanted);

} // namespace oracle
