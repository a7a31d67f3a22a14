#pragma once
// Finite distributive lattices as downset lattices of finite posets.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace subkit {

using Elem = int;           // index into Lattice::elements
using Mask = std::uint64_t; // downset as a bit vector over the poset

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a configured size cap would be exceeded.
struct LimitError : Error {
  using Error::Error;
};

int default_max_irreducibles();          // 6, or SUBKIT_MAX_ELEMS when set
void set_max_irreducibles(int cap);      // process-wide override (CLI flag)

class Poset {
public:
  // Pairs may omit reflexive entries; transitivity and antisymmetry are checked.
  Poset(std::vector<std::string> names,
        const std::vector<std::pair<std::string, std::string>>& leq_pairs);
  static Poset antichain(int n);
  static Poset chain(int n);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  bool leq(int i, int j) const { return (below_[j] >> i) & 1U; }
  Mask below(int i) const { return below_[i]; }   // principal downset of i
  int index_of(const std::string& name) const;     // -1 if absent

private:
  std::vector<std::string> names_;
  std::vector<Mask> below_;
};

class Lattice {
public:
  explicit Lattice(Poset p, std::optional<int> cap = std::nullopt);

  const Poset& base() const { return base_; }
  int size() const { return static_cast<int>(masks_.size()); }
  Elem bot() const { return 0; }
  Elem top() const { return size() - 1; }
  Mask mask(Elem x) const { return masks_.at(check(x)); }
  Elem from_mask(Mask m) const; // throws if m is not a downset

  Elem meet(Elem x, Elem y) const { return meet_[check(x) * size() + check(y)]; }
  Elem join(Elem x, Elem y) const { return join_[check(x) * size() + check(y)]; }
  bool leq(Elem x, Elem y) const { return (mask(x) & ~mask(y)) == 0; }
  Elem meet_all(const std::vector<Elem>& xs) const; // empty -> top
  Elem join_all(const std::vector<Elem>& xs) const; // empty -> bot

  // Irreducible names contained in the downset, sorted by name.
  std::vector<std::string> members(Elem x) const;
  // "bot", "top", the irreducible name for principal downsets, else a join of maximal names.
  std::string label(Elem x) const;
  Elem principal(int irreducible) const { return from_mask(base_.below(irreducible)); }
  Elem from_members(const std::vector<std::string>& names) const; // downset generated

private:
  int check(Elem x) const {
    if (x < 0 || x >= static_cast<int>(masks_.size())) throw Error("element index out of range");
    return x;
  }
  Poset base_;
  std::vector<Mask> masks_;
  std::vector<Elem> meet_, join_;
};

bool operator==(const Lattice& a, const Lattice& b);

// Injective bounded-lattice homomorphism sub -> ambient.
class LatticeEmbedding {
public:
  LatticeEmbedding(const Lattice& sub, const Lattice& ambient, std::vector<Elem> map);
  static LatticeEmbedding identity(const Lattice& l);

  const Lattice& sub() const { return sub_; }
  const Lattice& ambient() const { return amb_; }
  const std::vector<Elem>& map() const { return map_; }
  std::vector<Elem> image() const; // sorted

private:
  Lattice sub_;
  Lattice amb_;
  std::vector<Elem> map_;
};

std::vector<Elem> closed_elements(const LatticeEmbedding& e);
std::vector<Elem> open_elements(const LatticeEmbedding& e);
bool is_dense(const LatticeEmbedding& e);
bool is_compact(const LatticeEmbedding& e);

struct PropCheck {
  std::string item;
  bool pass;
  std::string witness; // empty on pass
};

struct CanextReport {
  bool precondition_ok = true;
  std::string diagnostic; // set when the precondition fails
  std::vector<PropCheck> items;
  bool all_pass() const;
};

CanextReport check_canext_props(const LatticeEmbedding& e);

} // namespace subkit
