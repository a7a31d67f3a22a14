// Command line front end for the subkit library.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "subkit/analytic.hpp"
#include "subkit/correspond.hpp"
#include "subkit/eval.hpp"
#include "subkit/io.hpp"
#include "subkit/kracht.hpp"
#include "subkit/parser.hpp"
#include "subkit/verifier.hpp"

using namespace subkit;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kLimits = 3 };

struct Config {
  bool json = false;
  bool trace = false;
  std::uint64_t seed = kDefaultSeed;
  int max_elems = 0;
  int depth_limit = 8;
  int samples = 200;
  std::string ineq, cond, term, roles, suite, poset, mode = "closure", assign;
  std::vector<std::string> models;
  int count = 0;
  bool no_closure_seeded = false;
};

void emit(const Config& cfg, const json& j, const std::string& text) {
  if (cfg.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

json term_json(const Term& t) {
  switch (t->op) {
  case Op::Var: return {{"op", "var"}, {"name", t->name}};
  case Op::Bot: return {{"op", "bot"}};
  case Op::Top: return {{"op", "top"}};
  case Op::And: return {{"op", "and"}, {"args", {term_json(t->l), term_json(t->r)}}};
  case Op::Or: return {{"op", "or"}, {"args", {term_json(t->l), term_json(t->r)}}};
  case Op::Imp: return {{"op", "imp"}, {"args", {term_json(t->l), term_json(t->r)}}};
  case Op::CoImp: return {{"op", "coimp"}, {"args", {term_json(t->l), term_json(t->r)}}};
  case Op::Neg: return {{"op", "neg"}, {"args", {term_json(t->l)}}};
  case Op::Sim: return {{"op", "sim"}, {"args", {term_json(t->l)}}};
  }
  return nullptr;
}

json trace_json(const std::vector<TraceStep>& trace) {
  json out = json::array();
  for (const auto& s : trace)
    out.push_back({{"rule", s.rule}, {"ref", s.ref}, {"before", s.before}, {"after", s.after}});
  return out;
}

std::string trace_text(const std::vector<TraceStep>& trace) {
  std::string s;
  for (const auto& st : trace) s += print_trace_step(st) + "\n";
  return s;
}


Model load_model(const std::string& path) {
  return build_model(model_spec_from_json(read_json_file(path)));
}

json assignment_json(const Lattice& l, const Assignment& a) {
  json out = json::object();
  for (const auto& [v, x] : a) out[v] = elem_to_json(l, x);
  return out;
}

std::string assignment_text(const Lattice& l, const Assignment& a) {
  std::string s;
  for (const auto& [v, x] : a) s += (s.empty() ? "" : ", ") + v + "=" + l.label(x);
  return s;
}

// "a=p,b=top,c=p+q": elements are bot, top, or '+'-joined irreducible names.
Assignment parse_assignment(const Lattice& l, const std::string& spec) {
  Assignment out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("assignment entries look like var=element");
    std::string v = item.substr(0, eq), e = item.substr(eq + 1);
    if (e == "bot" || e == "top" || e.find('+') == std::string::npos) {
      out[v] = elem_from_json(l, e);
    } else {
      json names = json::array();
      std::stringstream es(e);
      std::string n;
      while (std::getline(es, n, '+')) names.push_back(n);
      out[v] = elem_from_json(l, names);
    }
  }
  return out;
}

// eval_inequality with some variables pinned; the rest range over the whole lattice.
IneqResult eval_pinned(const Model& m, const Inequality& q, const Assignment& pinned) {
  if (pinned.empty()) return eval_inequality(m, q);
  std::vector<std::string> rest;
  for (const auto& v : inequality_vars(q))
    if (!pinned.count(v)) rest.push_back(v);
  const Lattice& l = m.lattice();
  Assignment env = pinned;
  std::vector<Elem> vals(rest.size(), 0);
  while (true) {
    for (size_t i = 0; i < rest.size(); ++i) env[rest[i]] = vals[i];
    Elem x = eval_term(m, env, q.lhs), y = eval_term(m, env, q.rhs);
    if (!l.leq(x, y)) return {false, env, x, y};
    size_t i = 0;
    while (i < rest.size() && ++vals[i] == l.size()) vals[i++] = 0;
    if (i == rest.size()) return {};
  }
}

int cmd_parse(const Config& cfg) {
  if (!cfg.ineq.empty()) {
    Inequality q = parse_inequality(cfg.ineq);
    emit(cfg, {{"kind", "inequality"}, {"text", print_inequality(q)},
               {"lhs", term_json(q.lhs)}, {"rhs", term_json(q.rhs)}},
         print_inequality(q) + "\n");
    return kOk;
  }
  if (!cfg.cond.empty()) {
    Condition c = parse_condition(cfg.cond);
    emit(cfg, {{"kind", "condition"}, {"text", print_condition(c)}, {"free", free_vars(c)},
               {"depth", quantifier_depth(c)}},
         print_condition(c) + "\nfree: " +
             [&] {
               std::string s;
               for (const auto& v : free_vars(c)) s += (s.empty() ? "" : " ") + v;
               return s.empty() ? std::string("(none)") : s;
             }() +
             "\ndepth: " + std::to_string(quantifier_depth(c)) + "\n");
    return kOk;
  }
  if (!cfg.term.empty()) {
    Term t = parse_term(cfg.term);
    emit(cfg, {{"kind", "term"}, {"text", print_term(t)}, {"ast", term_json(t)}},
         print_term(t) + "\n");
    return kOk;
  }
  throw Error("parse needs --ineq, --cond or --term");
}

json branch_json(const Branch& b) {
  json classes = json::array();
  for (unsigned c : b.classes) classes.push_back(class_names(c));
  return {{"side", b.from_lhs ? "+lhs" : "-rhs"}, {"leaf", b.leaf}, {"path", b.path},
          {"classes", classes}, {"split", b.split}, {"good", b.good()}};
}

int cmd_classify(const Config& cfg) {
  Inequality q = parse_inequality(cfg.ineq);
  AnalyticVerdict v = is_analytic(q);
  json branches = json::array();
  std::string text = "inequality: " + print_inequality(q) + "\nverdict: " +
                     (v.analytic ? "analytic" : "non-analytic") +
                     "\nnative verdict: " + (v.native_analytic ? "analytic" : "non-analytic") +
                     "\nbranches:\n";
  for (const auto& b : v.branches) {
    branches.push_back(branch_json(b));
    text += "  " + print_branch(b) + "  split=" + std::to_string(b.split) + "\n";
  }
  json offending = json::array();
  auto bad = v.offending();
  if (!bad.empty()) text += "offending:\n";
  for (const auto& b : bad) {
    offending.push_back(branch_json(b));
    text += "  " + print_branch(b) + "\n";
  }
  emit(cfg, {{"inequality", print_inequality(q)}, {"analytic", v.analytic},
             {"native_analytic", v.native_analytic}, {"branches", branches},
             {"offending", offending}},
       text);
  return v.analytic ? kOk : kNegative;
}

int cmd_correspond(const Config& cfg) {
  Inequality q = parse_inequality(cfg.ineq);
  try {
    CorrespondResult r = correspond(q);
    json j = {{"inequality", print_inequality(q)}, {"condition", print_condition(r.condition)}};
    std::string text = print_condition(r.condition) + "\n";
    if (cfg.trace) {
      j["trace"] = trace_json(r.trace);
      text = trace_text(r.trace) + text;
    }
    emit(cfg, j, text);
    return kOk;
  } catch (const CorrespondError& e) {
    json j = {{"inequality", print_inequality(q)}, {"error", e.what()}, {"stuck", e.stuck}};
    std::string text = std::string("error: ") + e.what() + "\n";
    if (!e.stuck.empty()) text += "stuck at: " + e.stuck + "\n";
    if (cfg.trace) {
      j["trace"] = trace_json(e.trace);
      text = trace_text(e.trace) + text;
    }
    emit(cfg, j, text);
    return kNegative;
  }
}

int cmd_inverse(const Config& cfg) {
  Condition c = parse_condition(cfg.cond);
  std::optional<RoleMap> roles;
  if (!cfg.roles.empty()) roles = parse_roles(cfg.roles);
  ShapeReport rep = validate_shape(c, roles);
  json viol = json::array();
  std::string text = "condition: " + print_condition(c) + "\n" + print_kracht(rep.formula) + "\n";
  for (const auto& v : rep.violations) {
    viol.push_back({{"clause", v.clause}, {"witness", v.witness}});
    text += "violation: clause " + std::to_string(v.clause) + ": " + v.witness + "\n";
  }
  for (const auto& n : rep.notes) text += "note: " + n + "\n";
  json roles_j = json::object();
  for (const auto& [v, r] : rep.formula.roles) roles_j[v] = std::string(1, role_char(r));
  json j = {{"condition", print_condition(c)}, {"kracht", rep.valid}, {"roles", roles_j},
            {"violations", viol}, {"notes", rep.notes}};
  if (!rep.valid) {
    text += "not a Kracht formula\n";
    emit(cfg, j, text);
    return kNegative;
  }
  try {
    InvertResult r = invert(rep.formula);
    j["inequality"] = print_inequality(r.ineq);
    if (cfg.trace) {
      j["trace"] = trace_json(r.trace);
      text += trace_text(r.trace);
    }
    text += "inequality: " + print_inequality(r.ineq) + "\n";
    emit(cfg, j, text);
    return kOk;
  } catch (const InvertError& e) {
    j["error"] = e.what();
    text += std::string("error: ") + e.what() + "\n";
    emit(cfg, j, text);
    return kNegative;
  }
}

ModelCorpus corpus_for(const Config& cfg) {
  if (cfg.models.empty())
    return default_corpus({cfg.seed, cfg.samples, !cfg.no_closure_seeded});
  ModelCorpus corpus;
  for (const auto& path : cfg.models)
    corpus.models.push_back({path, std::make_shared<const Model>(load_model(path))});
  return corpus;
}

json report_json(const EquivalenceReport& r, const ModelCorpus& corpus) {
  json j = {{"equivalent", r.equivalent}, {"models_checked", r.models_checked}};
  if (!r.equivalent) {
    const Lattice& l = corpus.models[r.model_index].model->lattice();
    json cx = {{"model", r.model_id}, {"inequality_holds", r.ineq_holds},
               {"condition_holds", r.cond_holds}, {"assignment", assignment_json(l, r.witness)}};
    if (r.lhs) {
      cx["lhs"] = elem_to_json(l, *r.lhs);
      cx["rhs"] = elem_to_json(l, *r.rhs);
    }
    j["counterexample"] = cx;
  }
  return j;
}

int cmd_verify(const Config& cfg) {
  EvalOptions opt{cfg.depth_limit};
  if (cfg.ineq.empty()) throw Error("verify needs --ineq");
  Inequality q = parse_inequality(cfg.ineq);
  if (!cfg.assign.empty() && (!cfg.cond.empty() || cfg.models.empty()))
    throw Error("--assign needs --model and no --cond");
  ModelCorpus corpus = corpus_for(cfg);
  if (cfg.cond.empty() && !cfg.models.empty()) {
    // Plain validity check of the inequality on each given model.
    json per = json::array();
    std::string text = "inequality: " + print_inequality(q) + "\n";
    bool all = true;
    for (const auto& cm : corpus.models) {
      IneqResult r = eval_pinned(*cm.model, q, parse_assignment(cm.model->lattice(), cfg.assign));
      const Lattice& l = cm.model->lattice();
      json e = {{"model", cm.id}, {"holds", r.holds}};
      text += "model " + cm.id + ": " + (r.holds ? "holds" : "fails");
      if (!r.holds) {
        all = false;
        e["assignment"] = assignment_json(l, r.witness);
        e["lhs"] = elem_to_json(l, r.lhs);
        e["rhs"] = elem_to_json(l, r.rhs);
        text += "; assignment " + assignment_text(l, r.witness) + "; lhs=" + l.label(r.lhs) +
                ", rhs=" + l.label(r.rhs);
      }
      text += "\n";
      per.push_back(e);
    }
    emit(cfg, {{"inequality", print_inequality(q)}, {"models", per}, {"holds", all}}, text);
    return all ? kOk : kNegative;
  }
  Condition c;
  std::string source = "given";
  if (!cfg.cond.empty()) {
    c = parse_condition(cfg.cond);
  } else {
    try {
      c = correspond(q).condition;
      source = "computed";
    } catch (const CorrespondError& e) {
      throw Error(std::string("no condition given and correspondence failed: ") + e.what());
    }
  }
  EquivalenceReport r = check_equivalence(q, c, corpus, opt);
  json j = {{"inequality", print_inequality(q)}, {"condition", print_condition(c)},
            {"condition_source", source}};
  j.update(report_json(r, corpus));
  emit(cfg, j,
       "inequality: " + print_inequality(q) + "\ncondition (" + source +
           "): " + print_condition(c) + "\n" + print_report(r, corpus) + "\n");
  return r.equivalent ? kOk : kNegative;
}

int cmd_eval(const Config& cfg) {
  if (cfg.models.size() != 1) throw Error("eval needs exactly one --model");
  Model m = load_model(cfg.models.front());
  const Lattice& l = m.lattice();
  if (!cfg.term.empty()) {
    Term t = parse_term(cfg.term);
    Assignment env = parse_assignment(l, cfg.assign);
    Elem x = eval_term(m, env, t);
    emit(cfg, {{"term", print_term(t)}, {"value", elem_to_json(l, x)}},
         print_term(t) + " = " + l.label(x) + "\n");
    return kOk;
  }
  if (!cfg.ineq.empty()) {
    Inequality q = parse_inequality(cfg.ineq);
    IneqResult r = eval_pinned(m, q, parse_assignment(l, cfg.assign));
    json j = {{"inequality", print_inequality(q)}, {"holds", r.holds}};
    std::string text = print_inequality(q) + ": " + (r.holds ? "holds" : "fails");
    if (!r.holds) {
      j["assignment"] = assignment_json(l, r.witness);
      j["lhs"] = elem_to_json(l, r.lhs);
      j["rhs"] = elem_to_json(l, r.rhs);
      text += "; assignment " + assignment_text(l, r.witness) + "; lhs=" + l.label(r.lhs) +
              ", rhs=" + l.label(r.rhs);
    }
    emit(cfg, j, text + "\n");
    return r.holds ? kOk : kNegative;
  }
  if (!cfg.cond.empty()) {
    Condition c = parse_condition(cfg.cond);
    CondResult r = eval_condition(m, c, {cfg.depth_limit});
    json j = {{"condition", print_condition(c)}, {"holds", r.holds}};
    std::string text = print_condition(c) + ": " + (r.holds ? "holds" : "fails");
    if (!r.holds) {
      j["assignment"] = assignment_json(l, r.witness);
      if (!r.witness.empty()) text += "; assignment " + assignment_text(l, r.witness);
    }
    emit(cfg, j, text + "\n");
    return r.holds ? kOk : kNegative;
  }
  throw Error("eval needs --term, --ineq or --cond");
}

std::string relation_text(const Lattice& l, const Relation& r) {
  std::string s;
  for (const auto& [a, b] : r.pairs()) s += "  " + l.label(a) + " prec " + l.label(b) + "\n";
  return s;
}

int cmd_closure(const Config& cfg) {
  if (cfg.models.size() != 1) throw Error("closure needs exactly one --model");
  ModelSpec spec = model_spec_from_json(read_json_file(cfg.models.front()));
  const Lattice& l = *spec.lattice;
  Relation r = closure(l, spec.seed);
  emit(cfg, {{"poset", poset_to_json(l.base())}, {"subordination", relation_to_json(l, r)},
             {"closed", true}},
       std::to_string(r.count()) + " pairs\n" + relation_text(l, r));
  return kOk;
}

int cmd_enumerate(const Config& cfg) {
  std::string path = !cfg.poset.empty() ? cfg.poset : (cfg.models.empty() ? "" : cfg.models.front());
  if (path.empty()) throw Error("enumerate needs --poset or --model");
  json j = read_json_file(path);
  Lattice l(poset_from_json(j.contains("poset") ? j.at("poset") : j));
  EnumOptions opt;
  if (cfg.mode == "exhaustive")
    opt.mode = EnumMode::Exhaustive;
  else if (cfg.mode == "closure")
    opt.mode = EnumMode::ClosureSeeded;
  else if (cfg.mode == "sampled")
    opt.mode = EnumMode::Sampled;
  else
    throw Error("unknown mode '" + cfg.mode + "' (exhaustive, closure, sampled)");
  opt.count = cfg.count > 0 ? cfg.count : 10;
  opt.seed = cfg.seed;
  auto rels = enumerate_subordinations(l, opt);
  json list = json::array();
  std::string text = std::to_string(rels.size()) + " subordination relations on " +
                     std::to_string(l.size()) + " elements\n";
  for (size_t i = 0; i < rels.size(); ++i) {
    list.push_back(relation_to_json(l, rels[i]));
    text += "#" + std::to_string(i) + "\n" + relation_text(l, rels[i]);
  }
  emit(cfg, {{"elements", l.size()}, {"mode", cfg.mode}, {"count", rels.size()},
             {"relations", list}},
       text);
  return kOk;
}

int cmd_regress(const Config& cfg) {
  auto suite = suite_from_json(read_json_file(cfg.suite));
  ModelCorpus corpus = corpus_for(cfg);
  auto results = run_regression(suite, corpus, {cfg.depth_limit});
  json entries = json::array();
  std::string text;
  int failed = 0;
  for (const auto& r : results) {
    json e = {{"name", r.name}, {"pass", r.pass()}};
    text += (r.pass() ? "PASS " : "FAIL ") + r.name + ": ";
    if (!r.error.empty()) {
      e["error"] = r.error;
      text += "error: " + r.error;
    } else {
      e.update(report_json(r.report, corpus));
      text += print_report(r.report, corpus);
    }
    text += "\n";
    if (!r.pass()) ++failed;
    entries.push_back(e);
  }
  text += std::to_string(results.size()) + " checked, " + std::to_string(failed) + " failed\n";
  emit(cfg, {{"entries", entries}, {"checked", results.size()}, {"failed", failed}}, text);
  return failed == 0 ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"subkit: subordination algebras, correspondence and finite-model verification"};
  app.require_subcommand(1);
  Config cfg;
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", cfg.json, "JSON output");
    sub->add_flag("--trace", cfg.trace, "print rule traces");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--max-elems", cfg.max_elems, "cap on join-irreducibles")->check(CLI::PositiveNumber);
    sub->add_option("--depth-limit", cfg.depth_limit, "quantifier depth limit")->check(CLI::PositiveNumber);
  };
  auto* parse = app.add_subcommand("parse", "parse and print a term, inequality or condition");
  auto* classify = app.add_subcommand("classify", "analyticity check with the branch table");
  auto* corr = app.add_subcommand("correspond", "first-order condition of an analytic inequality");
  auto* inv = app.add_subcommand("inverse", "recognize a Kracht condition and invert it");
  auto* verify = app.add_subcommand("verify", "check an inequality against a condition or models");
  auto* ev = app.add_subcommand("eval", "evaluate on a model file");
  auto* clo = app.add_subcommand("closure", "least subordination relation containing a seed");
  auto* en = app.add_subcommand("enumerate", "subordination relations on a lattice");
  auto* reg = app.add_subcommand("regress", "run a suite of inequality/condition pairs");
  for (auto* s : {parse, classify, corr, inv, verify, ev, clo, en, reg}) common(s);

  parse->add_option("--ineq", cfg.ineq);
  parse->add_option("--cond", cfg.cond);
  parse->add_option("--term", cfg.term);
  classify->add_option("--ineq", cfg.ineq)->required();
  corr->add_option("--ineq", cfg.ineq)->required();
  inv->add_option("--cond", cfg.cond)->required();
  inv->add_option("--roles", cfg.roles, "fixed roles, e.g. x=a,y=v");
  verify->add_option("--ineq", cfg.ineq)->required();
  verify->add_option("--cond", cfg.cond, "condition (computed by correspondence when omitted)");
  verify->add_option("--model", cfg.models, "model file(s); default corpus when omitted");
  verify->add_option("--samples", cfg.samples, "sampled models in the default corpus")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--assign", cfg.assign, "pinned variables for per-model checks, e.g. a=p");
  verify->add_flag("--no-closure-seeded", cfg.no_closure_seeded, "skip the 3-4 point posets");
  ev->add_option("--model", cfg.models)->required();
  ev->add_option("--term", cfg.term);
  ev->add_option("--ineq", cfg.ineq);
  ev->add_option("--cond", cfg.cond);
  ev->add_option("--assign", cfg.assign, "term variables, e.g. a=p,b=p+q");
  clo->add_option("--model", cfg.models)->required();
  en->add_option("--poset", cfg.poset, "poset or model file");
  en->add_option("--model", cfg.models);
  en->add_option("--mode", cfg.mode, "exhaustive, closure or sampled");
  en->add_option("--count", cfg.count, "samples in sampled mode")->check(CLI::PositiveNumber);
  reg->add_option("--suite", cfg.suite)->required();
  reg->add_option("--model", cfg.models, "model file(s); default corpus when omitted");
  reg->add_option("--samples", cfg.samples)->check(CLI::NonNegativeNumber);
  reg->add_flag("--no-closure-seeded", cfg.no_closure_seeded);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  try {
    if (cfg.max_elems > 0) set_max_irreducibles(cfg.max_elems);
    if (parse->parsed()) return cmd_parse(cfg);
    if (classify->parsed()) return cmd_classify(cfg);
    if (corr->parsed()) return cmd_correspond(cfg);
    if (inv->parsed()) return cmd_inverse(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (ev->parsed()) return cmd_eval(cfg);
    if (clo->parsed()) return cmd_closure(cfg);
    if (en->parsed()) return cmd_enumerate(cfg);
    if (reg->parsed()) return cmd_regress(cfg);
  } catch (const LimitError& e) {
    std::cerr << "limit: " << e.what() << "\n";
    return kLimits;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
