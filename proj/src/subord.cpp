#include "subkit/subord.hpp"

#include <algorithm>

namespace subkit {

Relation Relation::full(int size) {
  Relation r(size);
  std::fill(r.bits.begin(), r.bits.end(), 1);
  return r;
}

Relation Relation::order(const Lattice& l) {
  Relation r(l.size());
  for (Elem a = 0; a < l.size(); ++a)
    for (Elem b = 0; b < l.size(); ++b) r.set(a, b, l.leq(a, b));
  return r;
}

size_t Relation::count() const {
  return static_cast<size_t>(std::count(bits.begin(), bits.end(), 1));
}

std::vector<std::pair<Elem, Elem>> Relation::pairs() const {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      if (get(a, b)) out.emplace_back(a, b);
  return out;
}

namespace {
void check_dims(const Lattice& l, const Relation& r) {
  if (r.n != l.size() || r.bits.size() != static_cast<size_t>(r.n) * r.n)
    throw Error("relation dimension does not match the lattice");
}

std::string tuple(const Lattice& l, std::initializer_list<Elem> xs) {
  std::string s = "(";
  bool first = true;
  for (Elem x : xs) {
    s += (first ? "" : ", ") + l.label(x);
    first = false;
  }
  return s + ")";
}
} // namespace

std::vector<Violation> validate_subordination(const Lattice& l, const Relation& r) {
  check_dims(l, r);
  std::vector<Violation> out;
  const int n = l.size();
  if (!r.get(l.bot(), l.bot())) out.push_back({"bot-top", "bot prec bot is missing"});
  if (!r.get(l.top(), l.top())) out.push_back({"bot-top", "top prec top is missing"});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (r.get(a, b) && r.get(a, c) && !r.get(a, l.meet(b, c)))
          out.push_back({"AND", tuple(l, {a, b, c})});
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (r.get(a, c) && r.get(b, c) && !r.get(l.join(a, b), c))
          out.push_back({"OR", tuple(l, {a, b, c})});
  // One witness per missing consequent pair keeps the list proportional to |A|^2.
  Relation reported(n);
  for (auto [b, c] : r.pairs())
    for (Elem a = 0; a < n; ++a)
      for (Elem d = 0; d < n; ++d)
        if (l.leq(a, b) && l.leq(c, d) && !r.get(a, d) && !reported.get(a, d)) {
          reported.set(a, d);
          out.push_back({"WO-SI", l.label(a) + " <= " + l.label(b) + " prec " + l.label(c) +
                                      " <= " + l.label(d)});
        }
  return out;
}

Relation closure(const Lattice& l, const Relation& seed) {
  check_dims(l, seed);
  const int n = l.size();
  Relation r = seed;
  r.set(l.bot(), l.bot());
  r.set(l.top(), l.top());
  bool changed = true;
  auto add = [&](Elem a, Elem b) {
    if (!r.get(a, b)) {
      r.set(a, b);
      changed = true;
    }
  };
  while (changed) {
    changed = false;
    for (auto [b, c] : r.pairs())
      for (Elem a = 0; a < n; ++a)
        if (l.leq(a, b))
          for (Elem d = 0; d < n; ++d)
            if (l.leq(c, d)) add(a, d);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (r.get(a, b))
          for (Elem c = 0; c < n; ++c)
            if (r.get(a, c)) add(a, l.meet(b, c));
    for (Elem c = 0; c < n; ++c)
      for (Elem a = 0; a < n; ++a)
        if (r.get(a, c))
          for (Elem b = 0; b < n; ++b)
            if (r.get(b, c)) add(l.join(a, b), c);
  }
  return r;
}

SubordinationRelation::SubordinationRelation(LatticePtr l, Relation r)
    : lat_(std::move(l)), rel_(std::move(r)) {
  auto v = validate_subordination(*lat_, rel_);
  if (!v.empty()) throw Error("not a subordination relation: " + v.front().rule + " " + v.front().witness);
}

Elem slanted_imp(const SubordinationRelation& s, Elem a, Elem b) {
  const Lattice& l = s.lattice();
  Elem r = l.bot();
  for (Elem c = 0; c < l.size(); ++c)
    if (s.prec(l.meet(a, c), b)) r = l.join(r, c);
  return r;
}

Elem slanted_coimp(const SubordinationRelation& s, Elem a, Elem b) {
  const Lattice& l = s.lattice();
  Elem r = l.top();
  for (Elem c = 0; c < l.size(); ++c)
    if (s.prec(b, l.join(a, c))) r = l.meet(r, c);
  return r;
}

Elem neg(const SubordinationRelation& s, Elem a) { return slanted_imp(s, a, s.lattice().bot()); }
Elem sim(const SubordinationRelation& s, Elem a) { return slanted_coimp(s, a, s.lattice().top()); }

Elem circ(const SubordinationRelation& s, Elem u, Elem v) {
  const Lattice& l = s.lattice();
  Elem r = l.top();
  for (Elem w = 0; w < l.size(); ++w)
    if (l.leq(v, slanted_imp(s, u, w))) r = l.meet(r, w);
  return r;
}

SlantedAlgebra to_slanted(const SubordinationRelation& s) {
  const int n = s.lattice().size();
  std::vector<Elem> imp(static_cast<size_t>(n) * n), co(static_cast<size_t>(n) * n);
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b) {
      imp[a * n + b] = slanted_imp(s, a, b);
      co[a * n + b] = slanted_coimp(s, a, b);
    }
  return {s.lattice_ptr(), std::move(imp), std::move(co)};
}

namespace {
constexpr size_t kMaxPerClause = 64;

void push_capped(std::vector<Violation>& out, size_t& count, std::string rule, std::string w) {
  if (count++ < kMaxPerClause) out.push_back({std::move(rule), std::move(w)});
}

void validate_imp(const Lattice& l, const std::vector<Elem>& t, std::vector<Violation>& out) {
  const int n = l.size();
  auto I = [&](Elem a, Elem b) { return t[a * n + b]; };
  size_t c2 = 0, c3 = 0, c4 = 0;
  for (Elem a = 0; a < n; ++a) {
    if (I(a, l.top()) != l.top()) push_capped(out, c2, "imp-2", tuple(l, {a, l.top()}));
    if (I(l.bot(), a) != l.top()) push_capped(out, c3, "imp-3", tuple(l, {l.bot(), a}));
  }
  for (Elem a = 0; a < n; ++a)
    for (Elem b1 = 0; b1 < n; ++b1)
      for (Elem b2 = 0; b2 < n; ++b2) {
        if (I(a, l.meet(b1, b2)) != l.meet(I(a, b1), I(a, b2)))
          push_capped(out, c2, "imp-2", tuple(l, {a, b1, b2}));
        // a plays a1, b1 plays a2, b2 plays b
        if (I(l.join(a, b1), b2) != l.meet(I(a, b2), I(b1, b2)))
          push_capped(out, c3, "imp-3", tuple(l, {a, b1, b2}));
      }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (l.leq(c, I(a, b)) != l.leq(l.meet(a, c), I(l.top(), b)))
          push_capped(out, c4, "imp-4", tuple(l, {a, b, c}));
}

void validate_coimp(const Lattice& l, const std::vector<Elem>& t, std::vector<Violation>& out) {
  const int n = l.size();
  auto C = [&](Elem a, Elem b) { return t[a * n + b]; };
  size_t c2 = 0, c3 = 0, c4 = 0;
  for (Elem a = 0; a < n; ++a) {
    if (C(a, l.bot()) != l.bot()) push_capped(out, c2, "coimp-2", tuple(l, {a, l.bot()}));
    if (C(l.top(), a) != l.bot()) push_capped(out, c3, "coimp-3", tuple(l, {l.top(), a}));
  }
  for (Elem a = 0; a < n; ++a)
    for (Elem b1 = 0; b1 < n; ++b1)
      for (Elem b2 = 0; b2 < n; ++b2) {
        if (C(a, l.join(b1, b2)) != l.join(C(a, b1), C(a, b2)))
          push_capped(out, c2, "coimp-2", tuple(l, {a, b1, b2}));
        if (C(l.meet(a, b1), b2) != l.join(C(a, b2), C(b1, b2)))
          push_capped(out, c3, "coimp-3", tuple(l, {a, b1, b2}));
      }
  for (Elem a = 0; a < n; ++a)
    for (Elem b = 0; b < n; ++b)
      for (Elem c = 0; c < n; ++c)
        if (l.leq(C(a, b), c) != l.leq(C(l.bot(), b), l.join(a, c)))
          push_capped(out, c4, "coimp-4", tuple(l, {a, b, c}));
}
} // namespace

std::vector<Violation> validate_slanted(const SlantedAlgebra& alg) {
  const Lattice& l = *alg.lat;
  const size_t cells = static_cast<size_t>(l.size()) * l.size();
  std::vector<Violation> out;
  if (!alg.imp && !alg.coimp) {
    out.push_back({"tables", "neither imp nor coimp is present"});
    return out;
  }
  for (const auto* t : {alg.imp ? &*alg.imp : nullptr, alg.coimp ? &*alg.coimp : nullptr}) {
    if (!t) continue;
    if (t->size() != cells) throw Error("operator table is not total");
    for (Elem x : *t)
      if (x < 0 || x >= l.size()) throw Error("operator table entry out of range");
  }
  if (alg.imp) validate_imp(l, *alg.imp, out);
  if (alg.coimp) validate_coimp(l, *alg.coimp, out);
  return out;
}

SubordinationRelation to_subordination(const SlantedAlgebra& alg) {
  auto v = validate_slanted(alg);
  if (!v.empty()) {
    std::string msg = "tables are not slanted:";
    for (size_t i = 0; i < v.size() && i < 8; ++i) msg += " " + v[i].rule + v[i].witness;
    throw Error(msg);
  }
  const Lattice& l = *alg.lat;
  const int n = l.size();
  std::optional<Relation> from_imp, from_co;
  if (alg.imp) {
    Relation r(n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) r.set(a, b, l.leq(a, (*alg.imp)[l.top() * n + b]));
    from_imp = r;
  }
  if (alg.coimp) {
    Relation r(n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b) r.set(a, b, l.leq((*alg.coimp)[l.bot() * n + a], b));
    from_co = r;
  }
  if (from_imp && from_co && !(*from_imp == *from_co))
    throw Error("imp and coimp induce different subordination relations");
  return SubordinationRelation(alg.lat, from_imp ? *from_imp : *from_co);
}

Model::Model(SubordinationRelation s) : s_(std::move(s)), n_(s_.lattice().size()) {
  auto alg = to_slanted(s_);
  imp_ = std::move(*alg.imp);
  coimp_ = std::move(*alg.coimp);
}

} // namespace subkit
