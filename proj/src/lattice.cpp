#include "subkit/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <set>

namespace subkit {

namespace {
std::atomic<int> g_cap{0}; // 0: not overridden

int env_cap() {
  if (const char* s = std::getenv("SUBKIT_MAX_ELEMS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v > 0 && v < 63) return static_cast<int>(v);
  }
  return 6;
}
} // namespace

int default_max_irreducibles() {
  int c = g_cap.load();
  return c > 0 ? c : env_cap();
}

void set_max_irreducibles(int cap) {
  if (cap <= 0 || cap >= 63) throw Error("irreducible cap must be in 1..62");
  g_cap.store(cap);
}

Poset::Poset(std::vector<std::string> names,
             const std::vector<std::pair<std::string, std::string>>& leq_pairs)
    : names_(std::move(names)) {
  const int n = size();
  if (n >= 63) throw LimitError("poset too large for bit-vector encoding");
  std::set<std::string> seen;
  for (const auto& s : names_) {
    if (s.empty()) throw Error("empty element name");
    if (!seen.insert(s).second) throw Error("duplicate element name: " + s);
  }
  below_.assign(n, 0);
  for (int i = 0; i < n; ++i) below_[i] |= Mask{1} << i;
  for (const auto& [x, y] : leq_pairs) {
    int i = index_of(x), j = index_of(y);
    if (i < 0) throw Error("unknown element in leq: " + x);
    if (j < 0) throw Error("unknown element in leq: " + y);
    below_[j] |= Mask{1} << i;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (leq(i, j) && leq(j, k) && !leq(i, k))
          throw Error("leq is not transitive: " + names_[i] + " <= " + names_[j] + " <= " +
                      names_[k]);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (leq(i, j) && leq(j, i))
        throw Error("leq is not antisymmetric: " + names_[i] + ", " + names_[j]);
}

Poset Poset::antichain(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return Poset(names, {});
}

Poset Poset::chain(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(names[i], names[j]);
  return Poset(names, pairs);
}

int Poset::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  return it == names_.end() ? -1 : static_cast<int>(it - names_.begin());
}

Lattice::Lattice(Poset p, std::optional<int> cap) : base_(std::move(p)) {
  const int n = base_.size();
  const int limit = cap.value_or(default_max_irreducibles());
  if (n > limit)
    throw LimitError("poset has " + std::to_string(n) + " elements; cap is " +
                     std::to_string(limit));
  const Mask full = n == 0 ? 0 : (n == 64 ? ~Mask{0} : (Mask{1} << n) - 1);
  for (Mask m = 0;; ++m) {
    bool down = true;
    for (int i = 0; i < n && down; ++i)
      if ((m >> i) & 1U) down = (base_.below(i) & ~m) == 0;
    if (down) masks_.push_back(m);
    if (m == full) break;
  }
  const int s = size();
  meet_.resize(static_cast<size_t>(s) * s);
  join_.resize(static_cast<size_t>(s) * s);
  for (int x = 0; x < s; ++x)
    for (int y = 0; y < s; ++y) {
      meet_[x * s + y] = from_mask(masks_[x] & masks_[y]);
      join_[x * s + y] = from_mask(masks_[x] | masks_[y]);
    }
}

Elem Lattice::from_mask(Mask m) const {
  auto it = std::lower_bound(masks_.begin(), masks_.end(), m);
  if (it == masks_.end() || *it != m) throw Error("bit vector is not a downset");
  return static_cast<Elem>(it - masks_.begin());
}

Elem Lattice::meet_all(const std::vector<Elem>& xs) const {
  Elem r = top();
  for (Elem x : xs) r = meet(r, x);
  return r;
}

Elem Lattice::join_all(const std::vector<Elem>& xs) const {
  Elem r = bot();
  for (Elem x : xs) r = join(r, x);
  return r;
}

std::vector<std::string> Lattice::members(Elem x) const {
  std::vector<std::string> out;
  Mask m = mask(x);
  for (int i = 0; i < base_.size(); ++i)
    if ((m >> i) & 1U) out.push_back(base_.names()[i]);
  std::sort(out.begin(), out.end());
  return out;
}

std::string Lattice::label(Elem x) const {
  if (x == bot()) return "bot";
  if (x == top()) return "top";
  Mask m = mask(x);
  std::vector<std::string> maxima;
  for (int i = 0; i < base_.size(); ++i) {
    if (!((m >> i) & 1U)) continue;
    bool maximal = true;
    for (int j = 0; j < base_.size() && maximal; ++j)
      if (j != i && ((m >> j) & 1U) && base_.leq(i, j)) maximal = false;
    if (maximal) maxima.push_back(base_.names()[i]);
  }
  std::sort(maxima.begin(), maxima.end());
  std::string out;
  for (size_t i = 0; i < maxima.size(); ++i) out += (i ? " \\/ " : "") + maxima[i];
  return out;
}

Elem Lattice::from_members(const std::vector<std::string>& names) const {
  Mask m = 0;
  for (const auto& s : names) {
    int i = base_.index_of(s);
    if (i < 0) throw Error("unknown irreducible: " + s);
    m |= base_.below(i);
  }
  return from_mask(m);
}

bool operator==(const Lattice& a, const Lattice& b) {
  if (a.base().names() != b.base().names()) return false;
  for (int i = 0; i < a.base().size(); ++i)
    if (a.base().below(i) != b.base().below(i)) return false;
  return true;
}

LatticeEmbedding::LatticeEmbedding(const Lattice& sub, const Lattice& ambient,
                                   std::vector<Elem> map)
    : sub_(sub), amb_(ambient), map_(std::move(map)) {
  if (static_cast<int>(map_.size()) != sub_.size())
    throw Error("embedding map must cover every sub element");
  for (Elem y : map_)
    if (y < 0 || y >= amb_.size()) throw Error("embedding target out of range");
  if (map_[sub_.bot()] != amb_.bot() || map_[sub_.top()] != amb_.top())
    throw Error("embedding must preserve bot and top");
  std::set<Elem> distinct(map_.begin(), map_.end());
  if (static_cast<int>(distinct.size()) != sub_.size()) throw Error("embedding is not injective");
  for (Elem x = 0; x < sub_.size(); ++x)
    for (Elem y = 0; y < sub_.size(); ++y) {
      if (map_[sub_.meet(x, y)] != amb_.meet(map_[x], map_[y]))
        throw Error("embedding does not preserve meets");
      if (map_[sub_.join(x, y)] != amb_.join(map_[x], map_[y]))
        throw Error("embedding does not preserve joins");
    }
}

LatticeEmbedding LatticeEmbedding::identity(const Lattice& l) {
  std::vector<Elem> m(l.size());
  for (Elem x = 0; x < l.size(); ++x) m[x] = x;
  return LatticeEmbedding(l, l, m);
}

std::vector<Elem> LatticeEmbedding::image() const {
  std::vector<Elem> v = map_;
  std::sort(v.begin(), v.end());
  return v;
}

namespace {
// Meets (or joins) of all non-empty subsets of xs, as a sorted set. Saturating pairwise
// closure reaches every finite meet.
std::vector<Elem> saturate(const Lattice& l, const std::vector<Elem>& xs, bool meets) {
  std::set<Elem> s(xs.begin(), xs.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Elem> cur(s.begin(), s.end());
    for (Elem a : cur)
      for (Elem b : cur)
        if (s.insert(meets ? l.meet(a, b) : l.join(a, b)).second) grew = true;
  }
  return {s.begin(), s.end()};
}

bool contains(const std::vector<Elem>& sorted, Elem x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}
} // namespace

std::vector<Elem> closed_elements(const LatticeEmbedding& e) {
  return saturate(e.ambient(), e.image(), true);
}

std::vector<Elem> open_elements(const LatticeEmbedding& e) {
  return saturate(e.ambient(), e.image(), false);
}

bool is_dense(const LatticeEmbedding& e) {
  const Lattice& l = e.ambient();
  auto K = closed_elements(e), O = open_elements(e);
  for (Elem u = 0; u < l.size(); ++u) {
    std::vector<Elem> below, above;
    for (Elem k : K)
      if (l.leq(k, u)) below.push_back(k);
    for (Elem o : O)
      if (l.leq(u, o)) above.push_back(o);
    if (l.join_all(below) != u || l.meet_all(above) != u) return false;
  }
  return true;
}

bool is_compact(const LatticeEmbedding&) {
  // Every subset of a finite image is finite, so F' = F and I' = I witness the condition.
  return true;
}

bool CanextReport::all_pass() const {
  if (!precondition_ok) return false;
  return std::all_of(items.begin(), items.end(), [](const PropCheck& c) { return c.pass; });
}

CanextReport check_canext_props(const LatticeEmbedding& e) {
  CanextReport rep;
  if (!is_dense(e) || !is_compact(e)) {
    rep.precondition_ok = false;
    rep.diagnostic = is_dense(e) ? "embedding is not compact" : "embedding is not dense";
    return rep;
  }
  const Lattice& l = e.ambient();
  const auto A = e.image();
  const auto K = closed_elements(e);
  const auto O = open_elements(e);
  auto name = [&](Elem x) { return l.label(x); };
  auto item = [&](std::string id, auto&& fails) {
    std::string w;
    bool ok = !fails(w);
    rep.items.push_back({std::move(id), ok, ok ? "" : w});
  };

  item("closed-order", [&](std::string& w) {
    for (Elem k1 : K)
      for (Elem k2 : K) {
        bool rhs = true;
        for (Elem b : A)
          if (l.leq(k2, b) && !l.leq(k1, b)) rhs = false;
        if (l.leq(k1, k2) != rhs) { w = name(k1) + "," + name(k2); return true; }
      }
    return false;
  });
  item("open-order", [&](std::string& w) {
    for (Elem o1 : O)
      for (Elem o2 : O) {
        bool rhs = true;
        for (Elem b : A)
          if (l.leq(b, o1) && !l.leq(b, o2)) rhs = false;
        if (l.leq(o1, o2) != rhs) { w = name(o1) + "," + name(o2); return true; }
      }
    return false;
  });
  item("separation", [&](std::string& w) {
    for (Elem u1 = 0; u1 < l.size(); ++u1)
      for (Elem u2 = 0; u2 < l.size(); ++u2) {
        bool viaK = true, viaO = true;
        for (Elem k : K)
          if (l.leq(k, u1) && !l.leq(k, u2)) viaK = false;
        for (Elem o : O)
          if (l.leq(u2, o) && !l.leq(u1, o)) viaO = false;
        bool lhs = l.leq(u1, u2);
        if (lhs != viaK || lhs != viaO) { w = name(u1) + "," + name(u2); return true; }
      }
    return false;
  });
  item("closed-joins-open-meets", [&](std::string& w) {
    for (Elem k1 : K)
      for (Elem k2 : K)
        if (!contains(K, l.join(k1, k2))) { w = name(k1) + "," + name(k2); return true; }
    for (Elem o1 : O)
      for (Elem o2 : O)
        if (!contains(O, l.meet(o1, o2))) { w = name(o1) + "," + name(o2); return true; }
    return false;
  });
  item("meet-compactness", [&](std::string& w) {
    for (Elem b : A)
      for (Elem k1 : K)
        for (Elem k2 : K) {
          if (!l.leq(l.meet(k1, k2), b)) continue;
          bool found = false;
          for (Elem a1 : A)
            for (Elem a2 : A)
              if (!found && l.leq(k1, a1) && l.leq(k2, a2) && l.leq(l.meet(a1, a2), b)) found = true;
          if (!found) { w = name(b) + "," + name(k1) + "," + name(k2); return true; }
        }
    return false;
  });
  item("meet-compactness-open", [&](std::string& w) {
    for (Elem o : O)
      for (Elem k1 : K)
        for (Elem k2 : K) {
          if (!l.leq(l.meet(k1, k2), o)) continue;
          bool found = false;
          for (Elem b : A) {
            if (!l.leq(b, o)) continue;
            for (Elem a1 : A)
              for (Elem a2 : A)
                if (!found && l.leq(k1, a1) && l.leq(k2, a2) && l.leq(l.meet(a1, a2), b))
                  found = true;
          }
          if (!found) { w = name(o) + "," + name(k1) + "," + name(k2); return true; }
        }
    return false;
  });
  item("closed-meets", [&](std::string& w) {
    // Closure under binary meets plus the empty meet covers every subset of a finite K.
    if (!contains(K, l.top())) { w = "empty meet"; return true; }
    for (Elem a : K)
      for (Elem b : K)
        if (!contains(K, l.meet(a, b))) { w = name(a) + "," + name(b); return true; }
    return false;
  });
  item("join-compactness", [&](std::string& w) {
    for (Elem a : A)
      for (Elem o1 : O)
        for (Elem o2 : O) {
          if (!l.leq(a, l.join(o1, o2))) continue;
          bool found = false;
          for (Elem b1 : A)
            for (Elem b2 : A)
              if (!found && l.leq(b1, o1) && l.leq(b2, o2) && l.leq(a, l.join(b1, b2))) found = true;
          if (!found) { w = name(a) + "," + name(o1) + "," + name(o2); return true; }
        }
    return false;
  });
  item("join-compactness-closed", [&](std::string& w) {
    for (Elem k : K)
      for (Elem o1 : O)
        for (Elem o2 : O) {
          if (!l.leq(k, l.join(o1, o2))) continue;
          bool found = false;
          for (Elem a : A) {
            if (!l.leq(k, a)) continue;
            for (Elem b1 : A)
              for (Elem b2 : A)
                if (!found && l.leq(b1, o1) && l.leq(b2, o2) && l.leq(a, l.join(b1, b2)))
                  found = true;
          }
          if (!found) { w = name(k) + "," + name(o1) + "," + name(o2); return true; }
        }
    return false;
  });
  item("open-joins", [&](std::string& w) {
    if (!contains(O, l.bot())) { w = "empty join"; return true; }
    for (Elem a : O)
      for (Elem b : O)
        if (!contains(O, l.join(a, b))) { w = name(a) + "," + name(b); return true; }
    return false;
  });
  return rep;
}

} // namespace subkit
