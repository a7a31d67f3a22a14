#pragma once
// Subordination relations and the slanted operators they induce.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subkit/lattice.hpp"

namespace subkit {

using LatticePtr = std::shared_ptr<const Lattice>;

// Square boolean matrix over lattice elements; bits[a*n+b] means a relates to b.
struct Relation {
  int n = 0;
  std::vector<char> bits;

  Relation() = default;
  explicit Relation(int size) : n(size), bits(static_cast<size_t>(size) * size, 0) {}
  static Relation full(int size);
  static Relation order(const Lattice& l);

  bool get(Elem a, Elem b) const { return bits[static_cast<size_t>(a) * n + b] != 0; }
  void set(Elem a, Elem b, bool v = true) { bits[static_cast<size_t>(a) * n + b] = v ? 1 : 0; }
  size_t count() const;
  std::vector<std::pair<Elem, Elem>> pairs() const; // row-major order
  bool operator==(const Relation& o) const { return n == o.n && bits == o.bits; }
  bool operator<(const Relation& o) const { return bits < o.bits; }
};

struct Violation {
  std::string rule;    // axiom or clause name
  std::string witness; // element labels
};

std::vector<Violation> validate_subordination(const Lattice& l, const Relation& r);
Relation closure(const Lattice& l, const Relation& seed);

class SubordinationRelation {
public:
  // Throws with the first violation if r is not a subordination relation.
  SubordinationRelation(LatticePtr l, Relation r);
  const Lattice& lattice() const { return *lat_; }
  const LatticePtr& lattice_ptr() const { return lat_; }
  const Relation& relation() const { return rel_; }
  bool prec(Elem a, Elem b) const { return rel_.get(a, b); }

private:
  LatticePtr lat_;
  Relation rel_;
};

// Direct definitions (joins/meets over the carrier), not table lookups.
Elem slanted_imp(const SubordinationRelation& s, Elem a, Elem b);
Elem slanted_coimp(const SubordinationRelation& s, Elem a, Elem b);
Elem neg(const SubordinationRelation& s, Elem a);
Elem sim(const SubordinationRelation& s, Elem a);
Elem circ(const SubordinationRelation& s, Elem u, Elem v);

struct SlantedAlgebra {
  LatticePtr lat;
  std::optional<std::vector<Elem>> imp;   // imp[a*n+b]
  std::optional<std::vector<Elem>> coimp; // coimp[a*n+b]
};

SlantedAlgebra to_slanted(const SubordinationRelation& s);
std::vector<Violation> validate_slanted(const SlantedAlgebra& alg);
// Throws Error listing diagnostics when the tables are not slanted, or when imp and coimp
// disagree on the induced relation.
SubordinationRelation to_subordination(const SlantedAlgebra& alg);

// A subordination algebra with every operator tabulated; the evaluation substrate.
class Model {
public:
  explicit Model(SubordinationRelation s);
  const Lattice& lattice() const { return s_.lattice(); }
  const SubordinationRelation& subordination() const { return s_; }
  int size() const { return n_; }
  bool prec(Elem a, Elem b) const { return s_.prec(a, b); }
  Elem imp(Elem a, Elem b) const { return imp_[a * n_ + b]; }
  Elem coimp(Elem a, Elem b) const { return coimp_[a * n_ + b]; }
  Elem neg(Elem a) const { return imp(a, lattice().bot()); }
  Elem sim(Elem a) const { return coimp(a, lattice().top()); }

private:
  SubordinationRelation s_;
  int n_;
  std::vector<Elem> imp_, coimp_;
};

} // namespace subkit
