#include "subkit/analytic.hpp"

namespace subkit {

unsigned node_classes(Op op, bool pos) {
  switch (op) {
  case Op::And: return pos ? (kSLR | kSRA) : (kDelta | kSRR);
  case Op::Or: return pos ? (kDelta | kSRR) : (kSLR | kSRA);
  case Op::Imp: return pos ? kSRR : kSLR;
  case Op::CoImp: return pos ? kSLR : kSRR;
  case Op::Neg: return pos ? (kSLR | kSRA) : 0;
  case Op::Sim: return pos ? 0 : (kSLR | kSRA);
  default: return 0;
  }
}

std::string class_names(unsigned c) {
  static const std::pair<unsigned, const char*> names[] = {
      {kDelta, "Delta"}, {kSLR, "SLR"}, {kSRA, "SRA"}, {kSRR, "SRR"}};
  std::string s;
  for (const auto& [bit, name] : names)
    if (c & bit) s += (s.empty() ? "" : "|") + std::string(name);
  return s.empty() ? "-" : s;
}

namespace {
std::string symbol(Op op) {
  switch (op) {
  case Op::And: return "/\\";
  case Op::Or: return "\\/";
  case Op::Imp: return "->";
  case Op::CoImp: return ">-";
  case Op::Neg: return "neg";
  case Op::Sim: return "sim";
  case Op::Bot: return "bot";
  case Op::Top: return "top";
  case Op::Var: break;
  }
  return "";
}
} // namespace

SignedNode signed_tree(const Term& t, bool pos, bool expand) {
  if (expand && t->op == Op::Neg && !pos) return signed_tree(mk_imp(t->l, bot()), pos, expand);
  if (expand && t->op == Op::Sim && pos) return signed_tree(mk_coimp(t->l, top()), pos, expand);
  SignedNode n{t->op, t->name, pos, node_classes(t->op, pos), false, {}};
  switch (t->op) {
  case Op::And:
  case Op::Or:
    n.children.push_back(signed_tree(t->l, pos, expand));
    n.children.push_back(signed_tree(t->r, pos, expand));
    break;
  case Op::Imp:
  case Op::CoImp:
    n.children.push_back(signed_tree(t->l, !pos, expand));
    n.children.push_back(signed_tree(t->r, pos, expand));
    break;
  case Op::Neg:
  case Op::Sim:
    n.children.push_back(signed_tree(t->l, !pos, expand));
    n.unclassified = n.classes == 0;
    break;
  default: break;
  }
  return n;
}

namespace {
// First split point with a Skeleton prefix and a PIA suffix, or -1.
int find_split(const std::vector<unsigned>& cls) {
  const int n = static_cast<int>(cls.size());
  for (int s = 0; s <= n; ++s) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = (cls[i] & (i < s ? kSkeleton : kPIA)) != 0;
    if (ok) return s;
  }
  return -1;
}

void branches(const SignedNode& n, bool from_lhs, Branch& cur, std::vector<Branch>& out) {
  if (n.children.empty()) {
    Branch b = cur;
    b.leaf = n.op == Op::Var ? n.name : symbol(n.op);
    b.split = find_split(b.classes);
    out.push_back(std::move(b));
    return;
  }
  cur.path.push_back(std::string(n.positive ? "+" : "-") + symbol(n.op));
  cur.classes.push_back(n.classes);
  for (const auto& c : n.children) branches(c, from_lhs, cur, out);
  cur.path.pop_back();
  cur.classes.pop_back();
}

std::vector<Branch> all_branches(const Inequality& q, bool expand) {
  std::vector<Branch> out;
  Branch l{true, {}, {}, {}, -1}, r{false, {}, {}, {}, -1};
  branches(signed_tree(q.lhs, true, expand), true, l, out);
  branches(signed_tree(q.rhs, false, expand), false, r, out);
  return out;
}

bool all_good(const std::vector<Branch>& bs) {
  for (const auto& b : bs)
    if (!b.good()) return false;
  return true;
}
} // namespace

std::vector<Branch> AnalyticVerdict::offending() const {
  std::vector<Branch> out;
  for (const auto& b : branches)
    if (!b.good()) out.push_back(b);
  return out;
}

AnalyticVerdict is_analytic(const Inequality& q) {
  AnalyticVerdict v;
  v.branches = all_branches(q, true);
  v.native_branches = all_branches(q, false);
  v.analytic = all_good(v.branches);
  v.native_analytic = all_good(v.native_branches);
  return v;
}

std::string print_branch(const Branch& b) {
  std::string s = b.from_lhs ? "+lhs" : "-rhs";
  for (size_t i = 0; i < b.path.size(); ++i) {
    if (static_cast<int>(i) == b.split) s += " |";
    s += " " + b.path[i] + "[" + class_names(b.classes[i]) + "]";
  }
  if (b.split == static_cast<int>(b.path.size())) s += " |";
  return s + " " + b.leaf + (b.good() ? "" : "  (bad)");
}

} // namespace subkit
