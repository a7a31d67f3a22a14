#include "subkit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace subkit {

namespace {
std::string render(int line, int col, const std::vector<std::string>& expected,
                   const std::string& found, const std::string& detail) {
  std::string s = "line " + std::to_string(line) + ", column " + std::to_string(col) + ": ";
  if (!detail.empty()) s += detail + "; ";
  s += "expected one of {";
  for (size_t i = 0; i < expected.size(); ++i) s += (i ? ", " : "") + expected[i];
  return s + "}, found " + found;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
} // namespace

ParseError::ParseError(int l, int c, std::vector<std::string> exp, std::string f,
                       const std::string& detail)
    : Error(render(l, c, sorted(exp), f, detail)), line(l), col(c), expected(sorted(std::move(exp))),
      found(std::move(f)) {}

namespace {

enum class Tk { Ident, Sym, End };

struct Token {
  Tk kind;
  std::string text;
  int line, col;
};

const std::set<std::string> kKeywords = {"bot",  "top",  "neg",    "sim",
                                         "prec", "succ", "forall", "exists"};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const std::vector<std::string> syms = {"<=coimp", "<=and", "<=or", ">=imp", "==>",
                                                "->",      ">-",    "/\\",  "\\/",   "<=",
                                                ">=",      "&",     ".",    "(",     ")",
                                                ","};
  while (i < s.size()) {
    unsigned char ch = static_cast<unsigned char>(s[i]);
    if (std::isspace(ch)) {
      advance(1);
      continue;
    }
    if (std::isalpha(ch) || ch == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                              s[j] == '\''))
        ++j;
      out.push_back({Tk::Ident, s.substr(i, j - i), line, col});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& sym : syms) {
      if (s.compare(i, sym.size(), sym) != 0) continue;
      // "<=or" etc. only when the word is not part of a longer identifier.
      if (std::isalpha(static_cast<unsigned char>(sym.back())) && i + sym.size() < s.size()) {
        unsigned char nx = static_cast<unsigned char>(s[i + sym.size()]);
        if (std::isalnum(nx) || nx == '_' || nx == '\'') continue;
      }
      out.push_back({Tk::Sym, sym, line, col});
      advance(sym.size());
      matched = true;
      break;
    }
    if (!matched)
      throw ParseError(line, col, {"token"}, "'" + std::string(1, s[i]) + "'",
                       "unexpected character");
  }
  out.push_back({Tk::End, "", line, col});
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Term term(bool lattice_only) {
    lattice_only_ = lattice_only;
    return impl();
  }

  Term lterm() {
    lattice_only_ = true;
    return impl();
  }

  void expect_end() {
    if (peek().kind != Tk::End) fail({"end of input"});
  }

  const Token& peek() const { return toks_[pos_]; }
  bool at(const std::string& sym) const {
    const Token& t = peek();
    return t.text == sym && (t.kind == Tk::Sym || kKeywords.count(sym));
  }
  bool at_keyword(const std::string& kw) const {
    return peek().kind == Tk::Ident && peek().text == kw;
  }
  Token take() { return toks_[pos_++]; }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& detail = {}) const {
    const Token& t = peek();
    std::string found = t.kind == Tk::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.line, t.col, std::move(expected), found, detail);
  }

  void expect(const std::string& sym) {
    if (!at(sym)) fail({"'" + sym + "'"});
    take();
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tk::Ident || kKeywords.count(t.text)) fail({"identifier"});
    return take().text;
  }

  Condition condition() {
    Condition c;
    c.prefix = quants();
    c.consequent = conj();
    if (at("==>")) {
      take();
      c.implication = true;
      c.antecedent = std::move(c.consequent);
      c.inner = quants();
      c.consequent = conj();
    }
    if (peek().kind != Tk::End) fail({"'&'", "'==>'", "end of input"});
    check_binding(c);
    return c;
  }

private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  bool lattice_only_ = false;

  [[noreturn]] void slanted_in_condition() const {
    fail({"'/\\'", "'\\/'", "'<='", "'prec'"},
         "slanted connectives are not allowed in conditions");
  }

  Term impl() {
    Term l = disj();
    if (at("->")) {
      if (lattice_only_) slanted_in_condition();
      take();
      return mk_imp(l, imp_chain());
    }
    if (at(">-")) {
      if (lattice_only_) slanted_in_condition();
      take();
      Term r = disj();
      if (at("->") || at(">-"))
        fail({"')'", "'<='", "end of input"}, "chained '>-' or mixed '->'/'>-' needs parentheses");
      return mk_coimp(l, r);
    }
    return l;
  }

  Term imp_chain() {
    Term x = disj();
    if (at("->")) {
      take();
      return mk_imp(x, imp_chain());
    }
    if (at(">-")) fail({"'->'", "')'", "'<='"}, "mixing '->' and '>-' needs parentheses");
    return x;
  }

  Term disj() {
    Term t = conj_term();
    while (at("\\/")) {
      take();
      t = mk_or(t, conj_term());
    }
    return t;
  }

  Term conj_term() {
    Term t = unary();
    while (at("/\\")) {
      take();
      t = mk_and(t, unary());
    }
    return t;
  }

  Term unary() {
    if (at_keyword("neg") || at_keyword("sim")) {
      if (lattice_only_) slanted_in_condition();
      bool n = take().text == "neg";
      Term a = unary();
      return n ? mk_neg(a) : mk_sim(a);
    }
    return primary();
  }

  Term primary() {
    const Token& t = peek();
    if (t.kind == Tk::Sym && t.text == "(") {
      take();
      Term x = impl();
      expect(")");
      return x;
    }
    if (t.kind == Tk::Ident) {
      if (t.text == "bot") return take(), bot();
      if (t.text == "top") return take(), top();
      if (!kKeywords.count(t.text)) return var(take().text);
    }
    if (lattice_only_) fail({"identifier", "'bot'", "'top'", "'('"});
    fail({"identifier", "'bot'", "'top'", "'neg'", "'sim'", "'('"});
  }

  std::vector<Quant> quants() {
    std::vector<Quant> out;
    while (at_keyword("forall") || at_keyword("exists")) {
      Quant q;
      q.exists = take().text == "exists";
      // First slot: bound variable for unary restrictors, restricting term for binary ones.
      Term first;
      if (at_keyword("top") || at_keyword("bot")) {
        first = take().text == "top" ? top() : bot();
      } else {
        first = var(ident());
      }
      const Token& t = peek();
      static const std::vector<std::pair<std::string, Restr>> unary_r = {
          {"prec", Restr::Prec}, {"succ", Restr::Succ}, {"<=", Restr::Leq}, {">=", Restr::Geq}};
      static const std::vector<std::pair<std::string, Restr>> binary_r = {
          {"<=or", Restr::LeqOr},
          {"<=and", Restr::LeqAnd},
          {"<=coimp", Restr::LeqCoimp},
          {">=imp", Restr::GeqImp}};
      bool done = false;
      for (const auto& [sym, r] : unary_r)
        if (!done && t.text == sym) {
          if (first->op != Op::Var) fail({"identifier"});
          take();
          q.vars = {first->name};
          q.restr = r;
          q.by = restricting();
          done = true;
        }
      for (const auto& [sym, r] : binary_r)
        if (!done && t.text == sym && t.kind == Tk::Sym) {
          take();
          q.restr = r;
          q.by = first;
          expect("(");
          q.vars.push_back(ident());
          expect(",");
          q.vars.push_back(ident());
          expect(")");
          done = true;
        }
      if (!done) {
        if (first->op != Op::Var)
          fail({"'<=or'", "'<=and'", "'<=coimp'", "'>=imp'"});
        q.vars = {first->name};
      }
      if (!at(".")) fail({"'.'", "'prec'", "'succ'", "'<='", "'>='", "'<=or'", "'<=and'",
                          "'<=coimp'", "'>=imp'"});
      take();
      out.push_back(std::move(q));
    }
    return out;
  }

  Term restricting() {
    if (at_keyword("top")) return take(), top();
    if (at_keyword("bot")) return take(), bot();
    return var(ident());
  }

  std::vector<Atom> conj() {
    std::vector<Atom> out{atom()};
    while (at("&")) {
      take();
      out.push_back(atom());
    }
    return out;
  }

  Atom atom() {
    Term l = lterm();
    if (at("<=")) return take(), Atom{Rel::Leq, l, lterm()};
    if (at(">=")) return take(), Atom{Rel::Leq, lterm(), l};
    if (at_keyword("prec")) return take(), Atom{Rel::Prec, l, lterm()};
    if (at_keyword("succ")) return take(), Atom{Rel::Prec, lterm(), l};
    if (at("->") || at(">-")) slanted_in_condition();
    fail({"'<='", "'>='", "'prec'", "'succ'", "'/\\'", "'\\/'"});
  }

  void check_binding(const Condition& c) const {
    std::set<std::string> bound;
    for (const auto* qs : {&c.prefix, &c.inner})
      for (const auto& q : *qs) {
        for (const auto& v : q.vars)
          if (!bound.insert(v).second)
            throw ParseError(1, 1, {"fresh variable"}, "'" + v + "'",
                             "variable bound more than once");
        if (q.by && q.by->op == Op::Var &&
            std::find(q.vars.begin(), q.vars.end(), q.by->name) != q.vars.end())
          throw ParseError(1, 1, {"distinct restricting variable"}, "'" + q.by->name + "'",
                           "a variable cannot restrict itself");
      }
  }
};
} // namespace

Term parse_term(const std::string& text) {
  Parser p(text);
  Term t = p.term(false);
  p.expect_end();
  return t;
}

Inequality parse_inequality(const std::string& text) {
  Parser p(text);
  Term l = p.term(false);
  if (!p.at("<=")) p.fail({"'<='", "'->'", "'>-'", "'/\\'", "'\\/'"});
  p.take();
  Term r = p.term(false);
  p.expect_end();
  return {l, r};
}

Condition parse_condition(const std::string& text) {
  Parser p(text);
  return p.condition();
}

} // namespace subkit
