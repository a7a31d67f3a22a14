#include "subkit/verifier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <thread>

#include "subkit/parser.hpp"

namespace subkit {

namespace {

using Rows = std::vector<Mask>; // rows[a] = {c : a prec c}

Rows to_rows(const Relation& r) {
  Rows rows(r.n, 0);
  for (Elem a = 0; a < r.n; ++a)
    for (Elem c = 0; c < r.n; ++c)
      if (r.get(a, c)) rows[a] |= Mask{1} << c;
  return rows;
}

Relation from_rows(const Rows& rows) {
  const int n = static_cast<int>(rows.size());
  Relation r(n);
  for (Elem a = 0; a < n; ++a)
    for (Elem c = 0; c < n; ++c)
      if ((rows[a] >> c) & 1U) r.set(a, c);
  return r;
}

struct Tables {
  int n;
  std::vector<Mask> up; // up[c] = {d : c <= d}
  std::vector<std::vector<Elem>> above; // above[a] = {b : a <= b}
  explicit Tables(const Lattice& l) : n(l.size()), up(n, 0), above(n) {
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (l.leq(a, b)) {
          up[a] |= Mask{1} << b;
          above[a].push_back(b);
        }
  }
};

void saturate(const Lattice& l, const Tables& t, Rows& rows) {
  const int n = t.n;
  rows[l.bot()] |= Mask{1} << l.bot();
  rows[l.top()] |= Mask{1} << l.top();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Elem a = 0; a < n; ++a) {
      Mask m = rows[a];
      for (Elem b : t.above[a]) m |= rows[b];
      for (Elem c = 0; c < n; ++c)
        if ((m >> c) & 1U) m |= t.up[c];
      for (Elem c1 = 0; c1 < n; ++c1)
        if ((m >> c1) & 1U)
          for (Elem c2 = c1 + 1; c2 < n; ++c2)
            if ((m >> c2) & 1U) m |= Mask{1} << l.meet(c1, c2);
      if (m != rows[a]) {
        rows[a] = m;
        changed = true;
      }
    }
    for (Elem a1 = 0; a1 < n; ++a1)
      for (Elem a2 = a1 + 1; a2 < n; ++a2) {
        Mask common = rows[a1] & rows[a2];
        Elem j = l.join(a1, a2);
        if ((rows[j] | common) != rows[j]) {
          rows[j] |= common;
          changed = true;
        }
      }
  }
}

} // namespace

Relation fast_closure(const Lattice& l, const Relation& seed) {
  if (seed.n != l.size()) throw Error("relation size does not match lattice");
  Tables t(l);
  Rows rows = to_rows(seed);
  saturate(l, t, rows);
  return from_rows(rows);
}

bool is_subordination(const Lattice& l, const Relation& r) { return fast_closure(l, r) == r; }

std::vector<std::vector<Elem>> lattice_automorphisms(const Lattice& l) {
  const Poset& p = l.base();
  const int k = p.size();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<Elem>> out;
  do {
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = 0; j < k && ok; ++j)
        if (p.leq(i, j) != p.leq(perm[i], perm[j])) ok = false;
    if (!ok) continue;
    std::vector<Elem> map(l.size());
    for (Elem x = 0; x < l.size(); ++x) {
      Mask m = l.mask(x), img = 0;
      for (int i = 0; i < k; ++i)
        if ((m >> i) & 1U) img |= Mask{1} << perm[i];
      map[x] = l.from_mask(img);
    }
    out.push_back(std::move(map));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

Rows canonical(const Rows& rows, const std::vector<std::vector<Elem>>& autos) {
  Rows best;
  for (const auto& f : autos) {
    Rows img(rows.size(), 0);
    for (size_t a = 0; a < rows.size(); ++a)
      for (size_t c = 0; c < rows.size(); ++c)
        if ((rows[a] >> c) & 1U) img[f[a]] |= Mask{1} << f[c];
    if (best.empty() || img < best) best = img;
  }
  return best;
}

} // namespace

std::vector<Relation> enumerate_subordinations(const Lattice& l, const EnumOptions& opt) {
  const int n = l.size();
  Tables t(l);
  std::set<Rows> found;
  auto close = [&](Rows rows) {
    saturate(l, t, rows);
    return rows;
  };
  switch (opt.mode) {
  case EnumMode::Exhaustive: {
    if (n > 4) throw LimitError("exhaustive enumeration needs at most 4 elements, got " +
                                std::to_string(n));
    const int bits = n * n;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      Rows rows(n, 0);
      for (int k = 0; k < bits; ++k)
        if ((code >> k) & 1U) rows[k / n] |= Mask{1} << (k % n);
      if (close(rows) == rows) found.insert(rows);
    }
    break;
  }
  case EnumMode::ClosureSeeded: {
    Rows base = close(Rows(n, 0));
    found.insert(base);
    found.insert(close(to_rows(Relation::order(l))));
    found.insert(close(to_rows(Relation::full(n))));
    std::vector<std::pair<Elem, Elem>> free;
    for (Elem a = 0; a < n; ++a)
      for (Elem c = 0; c < n; ++c)
        if (!((base[a] >> c) & 1U)) free.emplace_back(a, c);
    for (size_t i = 0; i < free.size(); ++i) {
      Rows one = base;
      one[free[i].first] |= Mask{1} << free[i].second;
      one = close(one);
      found.insert(one);
      for (size_t k = i + 1; k < free.size(); ++k) {
        if ((one[free[k].first] >> free[k].second) & 1U) continue; // same closure as one
        Rows two = one;
        two[free[k].first] |= Mask{1} << free[k].second;
        found.insert(close(two));
      }
    }
    break;
  }
  case EnumMode::Sampled: {
    std::mt19937_64 rng(opt.seed);
    const int target = opt.count;
    for (int attempt = 0; static_cast<int>(found.size()) < target && attempt < 50 * target + 50;
         ++attempt) {
      Rows rows(n, 0);
      int k = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < k; ++i) {
        Elem a = static_cast<Elem>(rng() % n), c = static_cast<Elem>(rng() % n);
        rows[a] |= Mask{1} << c;
      }
      found.insert(close(rows));
    }
    break;
  }
  }
  if (opt.up_to_iso) {
    auto autos = lattice_automorphisms(l);
    std::set<Rows> reps;
    for (const auto& rows : found) reps.insert(canonical(rows, autos));
    found = std::move(reps);
  }
  std::vector<Relation> out;
  for (const auto& rows : found) out.push_back(from_rows(rows));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

const std::array<const char*, 6> kPointNames = {"p", "q", "r", "s", "t", "u"};

std::vector<std::string> point_names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i)
    out.push_back(i < 6 ? kPointNames[i] : "x" + std::to_string(i));
  return out;
}

// Strict order as an n*n bit string; le[i*n+j] means i < j.
using Strict = std::vector<char>;

Poset poset_from_strict(int n, const Strict& lt) {
  auto names = point_names(n);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (lt[i * n + j]) pairs.emplace_back(names[i], names[j]);
  return Poset(names, pairs);
}

std::string describe(const Poset& p) {
  std::string s;
  const int n = p.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !p.leq(i, j)) continue;
      bool cover = true;
      for (int k = 0; k < n && cover; ++k)
        if (k != i && k != j && p.leq(i, k) && p.leq(k, j)) cover = false;
      if (cover) s += (s.empty() ? "" : ",") + p.names()[i] + "<" + p.names()[j];
    }
  if (s.empty()) s = "antichain";
  return std::to_string(n) + "[" + s + "]";
}

} // namespace

std::vector<Poset> posets_up_to_iso(int n) {
  if (n < 0 || n > 6) throw LimitError("poset enumeration supports at most 6 points");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<int> perm(n);
  std::set<Strict> canon;
  std::vector<int> choice(pairs.size(), 0); // 0 unrelated, 1 i<j, 2 j<i
  while (true) {
    Strict lt(static_cast<size_t>(n) * n, 0);
    for (size_t k = 0; k < pairs.size(); ++k) {
      auto [i, j] = pairs[k];
      if (choice[k] == 1) lt[i * n + j] = 1;
      if (choice[k] == 2) lt[j * n + i] = 1;
    }
    bool transitive = true;
    for (int i = 0; i < n && transitive; ++i)
      for (int j = 0; j < n && transitive; ++j)
        for (int k = 0; k < n && transitive; ++k)
          if (lt[i * n + j] && lt[j * n + k] && !lt[i * n + k]) transitive = false;
    if (transitive) {
      std::iota(perm.begin(), perm.end(), 0);
      Strict best;
      do {
        Strict img(lt.size(), 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) img[perm[i] * n + perm[j]] = lt[i * n + j];
        if (best.empty() || img < best) best = img;
      } while (std::next_permutation(perm.begin(), perm.end()));
      canon.insert(best);
    }
    size_t k = 0;
    while (k < choice.size() && ++choice[k] == 3) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  std::vector<Poset> out;
  for (const auto& lt : canon) out.push_back(poset_from_strict(n, lt));
  return out;
}

Poset random_poset(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Strict lt(static_cast<size_t>(n) * n, 0);
  const auto threshold = static_cast<std::uint64_t>(p * 1000.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 1000 < threshold) lt[i * n + j] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lt[i * n + k] && lt[k * n + j]) lt[i * n + j] = 1;
  return poset_from_strict(n, lt);
}

void ModelCorpus::add(const LatticePtr& l, const Relation& r, const std::string& id) {
  models.push_back({id, std::make_shared<const Model>(SubordinationRelation(l, r))});
}

namespace {

void add_all(ModelCorpus& c, const Poset& p, const EnumOptions& opt, const std::string& kind) {
  auto l = std::make_shared<const Lattice>(p);
  auto rels = enumerate_subordinations(*l, opt);
  for (size_t i = 0; i < rels.size(); ++i)
    c.add(l, rels[i], kind + ":" + describe(p) + "#" + std::to_string(i));
}

void add_small(ModelCorpus& c) {
  EnumOptions ex{EnumMode::Exhaustive, 0, 0};
  for (int n = 0; n <= 2; ++n)
    for (const auto& p : posets_up_to_iso(n)) add_all(c, p, ex, "exhaustive");
  add_all(c, Poset::chain(3), ex, "exhaustive");
}

bool is_chain(const Poset& p) {
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j)
      if (!p.leq(i, j) && !p.leq(j, i)) return false;
  return true;
}

} // namespace

ModelCorpus small_corpus() {
  ModelCorpus c;
  add_small(c);
  return c;
}

ModelCorpus default_corpus(const CorpusOptions& opt) {
  ModelCorpus c;
  add_small(c);
  if (opt.closure_seeded) {
    EnumOptions cs{EnumMode::ClosureSeeded, 0, 0, true};
    for (int n = 3; n <= 4; ++n)
      for (const auto& p : posets_up_to_iso(n))
        if (!(n == 3 && is_chain(p))) add_all(c, p, cs, "closure");
  }
  std::mt19937_64 rng(opt.seed);
  for (int i = 0; i < opt.samples; ++i) {
    int n = 5 + static_cast<int>(rng() % 2);
    Poset p = random_poset(n, 0.5, rng());
    auto l = std::make_shared<const Lattice>(p);
    auto rels = enumerate_subordinations(*l, {EnumMode::Sampled, 1, rng()});
    c.add(l, rels.front(), "sample:" + describe(p) + "#" + std::to_string(i));
  }
  return c;
}

ModelCorpus single_model_corpus(const Model& m, const std::string& id) {
  ModelCorpus c;
  c.models.push_back({id, std::make_shared<const Model>(m)});
  return c;
}

namespace {

// Smallest i in [0, n) with pred(i), evaluated on worker threads; n when there is none.
template <class F>
size_t first_index(size_t n, F pred) {
  std::atomic<size_t> next{0}, first{n};
  std::exception_ptr error;
  std::mutex mu;
  auto work = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n || i > first.load()) return;
      bool hit = false;
      try {
        hit = pred(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        first.store(0);
        return;
      }
      if (hit) {
        size_t cur = first.load();
        while (i < cur && !first.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return first.load();
}

} // namespace

EquivalenceReport check_equivalence(const Inequality& q, const Condition& c,
                                    const ModelCorpus& corpus, const EvalOptions& opt) {
  int d = quantifier_depth(c);
  if (d > opt.depth_limit)
    throw LimitError("quantifier depth " + std::to_string(d) + " exceeds limit " +
                     std::to_string(opt.depth_limit));
  const size_t n = corpus.models.size();
  size_t hit = first_index(n, [&](size_t i) {
    const Model& m = *corpus.models[i].model;
    return eval_inequality(m, q).holds != eval_condition(m, c, opt).holds;
  });
  EquivalenceReport r;
  if (hit == n) {
    r.models_checked = n;
    return r;
  }
  const Model& m = *corpus.models[hit].model;
  IneqResult ir = eval_inequality(m, q);
  CondResult cr = eval_condition(m, c, opt);
  r.equivalent = false;
  r.models_checked = hit + 1;
  r.model_id = corpus.models[hit].id;
  r.model_index = hit;
  r.ineq_holds = ir.holds;
  r.cond_holds = cr.holds;
  if (!ir.holds) {
    r.witness = ir.witness;
    r.lhs = ir.lhs;
    r.rhs = ir.rhs;
  } else {
    r.witness = cr.witness;
  }
  return r;
}

std::vector<RegressionResult> run_regression(const std::vector<SuiteEntry>& suite,
                                             const ModelCorpus& corpus, const EvalOptions& opt) {
  std::vector<RegressionResult> out;
  for (const auto& e : suite) {
    RegressionResult r;
    r.name = e.name;
    try {
      r.report = check_equivalence(parse_inequality(e.ineq), parse_condition(e.cond), corpus, opt);
    } catch (const Error& err) {
      r.error = err.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string print_report(const EquivalenceReport& r, const ModelCorpus& corpus) {
  if (r.equivalent) return "equivalent on " + std::to_string(r.models_checked) + " models";
  const Lattice& l = corpus.models.at(r.model_index).model->lattice();
  std::string s = "counterexample in model " + r.model_id + ": inequality " +
                  (r.ineq_holds ? "holds" : "fails") + ", condition " +
                  (r.cond_holds ? "holds" : "fails");
  if (!r.witness.empty()) {
    s += "; assignment";
    bool first = true;
    for (const auto& [v, x] : r.witness) {
      s += (first ? " " : ", ") + v + "=" + l.label(x);
      first = false;
    }
  }
  if (r.lhs) s += "; lhs=" + l.label(*r.lhs) + ", rhs=" + l.label(*r.rhs);
  return s;
}

} // namespace subkit
