#pragma once
// Model corpora and semantic equivalence checking of inequalities against conditions.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "subkit/eval.hpp"
#include "subkit/io.hpp"

namespace subkit {

constexpr std::uint64_t kDefaultSeed = 0xDE0417C;

enum class EnumMode { Exhaustive, ClosureSeeded, Sampled };

struct EnumOptions {
  EnumMode mode = EnumMode::ClosureSeeded;
  int count = 0;          // Sampled
  std::uint64_t seed = kDefaultSeed;
  bool up_to_iso = false; // keep one relation per orbit of the lattice automorphisms
};

// Sorted, duplicate free. Exhaustive filters all 2^(n*n) relations and needs |A| <= 4.
std::vector<Relation> enumerate_subordinations(const Lattice& l, const EnumOptions& opt);

// Bitset saturation; agrees with closure() and is used for large seed sets.
Relation fast_closure(const Lattice& l, const Relation& seed);
bool is_subordination(const Lattice& l, const Relation& r);

// Automorphisms as element permutations, induced by the automorphisms of the base poset.
std::vector<std::vector<Elem>> lattice_automorphisms(const Lattice& l);

// Posets on n points up to isomorphism, in a canonical deterministic order.
std::vector<Poset> posets_up_to_iso(int n);
// Random poset on n points: each pair i<j is related with probability p, then closed.
Poset random_poset(int n, double p, std::uint64_t seed);

struct CorpusModel {
  std::string id;
  std::shared_ptr<const Model> model;
};

struct ModelCorpus {
  std::vector<CorpusModel> models;
  void add(const LatticePtr& l, const Relation& r, const std::string& id);
};

struct CorpusOptions {
  std::uint64_t seed = kDefaultSeed;
  int samples = 200;
  bool closure_seeded = true; // posets of size 3-4 other than the 3-chain
};

// Exhaustive over all lattices with at most 4 elements, closure-seeded over the remaining
// posets of size 3 and 4, and sampled models over random posets of size 5 and 6.
ModelCorpus default_corpus(const CorpusOptions& opt = {});
ModelCorpus small_corpus(); // exhaustive part only
ModelCorpus single_model_corpus(const Model& m, const std::string& id);

struct EquivalenceReport {
  bool equivalent = true;
  size_t models_checked = 0;
  // Set on a counterexample.
  std::string model_id;
  size_t model_index = 0;
  bool ineq_holds = true, cond_holds = true;
  Assignment witness;
  std::optional<Elem> lhs, rhs; // inequality sides when the inequality fails
};

// Finds the first model in corpus order where the two sides disagree.
EquivalenceReport check_equivalence(const Inequality& q, const Condition& c,
                                    const ModelCorpus& corpus, const EvalOptions& opt = {});

struct RegressionResult {
  std::string name;
  std::string error; // parse or limit error, empty otherwise
  EquivalenceReport report;
  bool pass() const { return error.empty() && report.equivalent; }
};

std::vector<RegressionResult> run_regression(const std::vector<SuiteEntry>& suite,
                                             const ModelCorpus& corpus,
                                             const EvalOptions& opt = {});

std::string print_report(const EquivalenceReport& r, const ModelCorpus& corpus);

} // namespace subkit
