#include "selcalc/cli.hpp"

#include "selcalc/equations.hpp"
#include "selcalc/operational.hpp"
#include "selcalc/selection.hpp"
#include "selcalc/show.hpp"
#include "selcalc/strategies.hpp"
#include "selcalc/suites.hpp"
#include "selcalc/testgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace selcalc {

namespace {

using json = nlohmann::json;

constexpr int kJsonVersion = 1;
constexpr std::size_t kRefutationGammas = 64;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Mode mode_from_flag(const std::string& s) {
  if (s == "rewards") return Mode::Rewards;
  if (s == "prob") return Mode::Prob;
  throw UsageError("unknown mode '" + s + "' (expected rewards or prob)");
}

struct Loaded {
  Program program;
  Mode mode;
  TypePtr type;
};

// The prelude decides the mode; a differing --mode flag is an error.
Loaded load(const std::string& path, const std::string& mode_flag) {
  Loaded l;
  l.program = parse_program(slurp(path));
  std::optional<Mode> flag;
  if (!mode_flag.empty()) flag = mode_from_flag(mode_flag);
  if (l.program.mode && flag && *l.program.mode != *flag)
    throw UsageError(path + " declares mode " + mode_name(*l.program.mode) + " but --mode " + mode_flag + " was given");
  l.mode = l.program.mode ? *l.program.mode : flag.value_or(Mode::Rewards);
  l.type = typecheck(l.program.sig, l.program.term, l.mode);
  return l;
}

std::string default_monad(Mode mode) { return mode == Mode::Rewards ? "W" : "DW"; }

template <class F>
auto with_monad(const std::string& name, F&& f) {
  if (name == "W" || name == "w") return f(WMonad{});
  if (name == "DW" || name == "dw" || name == "T1" || name == "t1") return f(DWMonad{});
  if (name == "T2" || name == "t2") return f(T2Monad{});
  if (name == "T3" || name == "t3") return f(T3Monad{});
  throw UsageError("unknown monad '" + name + "' (expected W, DW, T1, T2 or T3)");
}

ProbMonad prob_monad_flag(const std::string& name) {
  try {
    return prob_monad_from_name(name.empty() ? "T1" : name);
  } catch (const Error&) {
    throw UsageError("unknown probabilistic monad '" + name + "' (expected T1, T2 or T3)");
  }
}

// ------------------------------------------------------------ value output

template <class A>
json value_json(const Rewarded<A>& a) {
  return {{"reward", to_string(a.reward)}, {"value", show(a.value)}};
}

template <class A>
json value_json(const DWVal<A>& d) {
  json atoms = json::array();
  for (const auto& [a, p] : d.atoms) atoms.push_back({{"prob", to_string(p)}, {"reward", to_string(a.reward)}, {"value", show(a.value)}});
  return {{"outcome", atoms}};
}

template <class A>
json value_json(const T2Val<A>& v) {
  json atoms = json::array();
  for (const auto& a : v.atoms) atoms.push_back({{"prob", to_string(a.prob)}, {"reward", to_string(a.rew)}, {"value", show(a.value)}});
  return {{"dist", atoms}};
}

template <class A>
json value_json(const T3Val<A>& v) {
  json atoms = json::array();
  for (const auto& [x, p] : v.dist.atoms) atoms.push_back({{"prob", to_string(p)}, {"value", show(x)}});
  return {{"dist", atoms}, {"reward", to_string(v.rew)}};
}

template <class A>
void print_value(std::ostream& out, const Rewarded<A>& a) {
  out << "reward " << to_string(a.reward) << ", value " << show(a.value) << "\n";
}

template <class A>
void print_value(std::ostream& out, const DWVal<A>& d) {
  if (d.atoms.size() == 1) return print_value(out, d.atoms[0].first);
  for (const auto& [a, p] : d.atoms) out << to_string(p) << ": reward " << to_string(a.reward) << ", value " << show(a.value) << "\n";
  out << "expected reward " << to_string(expect0(d)) << "\n";
}

template <class A>
void print_value(std::ostream& out, const T2Val<A>& v) {
  out << show(v) << "\n";
}

template <class A>
void print_value(std::ostream& out, const T3Val<A>& v) {
  out << show(v) << "\n";
}

template <class V>
void emit(std::ostream& out, bool as_json, const V& v, json extra = json::object()) {
  if (!as_json) return print_value(out, v);
  json j = value_json(v);
  j["version"] = kJsonVersion;
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  out << j.dump() << "\n";
}

void emit_json(std::ostream& out, json j) {
  j["version"] = kJsonVersion;
  out << j.dump() << "\n";
}

// ----------------------------------------------------------------- commands

struct Common {
  bool json = false;
  std::string mode;
  std::string monad;
};

struct EvalOptions {
  std::string file;
  std::string semantics = "selection";
  std::string gamma;
  bool trace = false;
  bool oracle = false;
};

int cmd_eval(const Common& common, const EvalOptions& o, std::ostream& out) {
  if (!common.monad.empty() && o.semantics != "denotational" && o.semantics != "observe")
    throw UsageError("--monad applies only to the denotational and observe semantics");
  if (!o.gamma.empty() && o.semantics != "denotational") throw UsageError("--gamma applies only to the denotational semantics");
  if (o.trace && o.semantics != "ordinary") throw UsageError("--trace applies only to the ordinary semantics");
  if (o.oracle && o.semantics != "selection") throw UsageError("--oracle applies only to the selection semantics");
  Loaded l = load(o.file, common.mode);
  const TermPtr& program = l.program.term;

  if (o.semantics == "ordinary") {
    std::vector<std::string> steps;
    TraceFn trace;
    if (o.trace) trace = [&](const TermPtr& t) { steps.push_back(print_term(t)); };
    TermPtr effect = eval_effect(program, kDefaultStepBudget, trace);
    if (common.json) {
      json j = {{"effect", print_term(effect)}};
      if (o.trace) j["trace"] = steps;
      emit_json(out, j);
    } else {
      for (const auto& s : steps) out << "  " << s << "\n";
      out << print_term(effect) << "\n";
    }
    return kExitOk;
  }
  if (o.semantics == "selection") {
    Outcome result = o.oracle ? select_bruteforce(program) : select_fast(eval_effect(program));
    emit(out, common.json, result);
    return kExitOk;
  }
  if (o.semantics == "denotational") {
    RewardTable gamma = o.gamma.empty() || o.gamma == "zero" ? zero_table() : parse_reward_table(slurp(o.gamma));
    std::string monad = common.monad.empty() ? default_monad(l.mode) : common.monad;
    with_monad(monad, [&](auto tag) {
      using M = decltype(tag);
      emit(out, common.json, denote_program<M>(program)(gamma_of<M>(gamma)), {{"monad", M::name}});
      return 0;
    });
    return kExitOk;
  }
  if (o.semantics == "observe") {
    std::string monad = common.monad.empty() ? default_monad(l.mode) : common.monad;
    with_monad(monad, [&](auto tag) {
      using M = decltype(tag);
      emit(out, common.json, observe<M>(program), {{"monad", M::name}});
      return 0;
    });
    return kExitOk;
  }
  throw UsageError("unknown semantics '" + o.semantics + "' (expected ordinary, selection, denotational or observe)");
}

int cmd_canon(const Common& common, const std::string& file, std::ostream& out) {
  Loaded l = load(file, common.mode);
  if (l.mode == Mode::Rewards) {
    if (!common.monad.empty()) throw UsageError("--monad applies only to probabilistic programs");
    CanonicalForm cf = canon_rewards(l.program.term);
    if (common.json) {
      json entries = json::array();
      for (const auto& e : cf) entries.push_back({{"reward", to_string(e.reward)}, {"value", print_value_key(e.value)}});
      emit_json(out, {{"canonical", print_canonical(cf)}, {"entries", entries}});
    } else {
      out << print_canonical(cf) << "\n";
    }
    return kExitOk;
  }
  WeakCanonicalForm w = weak_canon_prob(l.program.term, prob_monad_flag(common.monad));
  if (common.json) {
    json branches = json::array();
    for (const auto& n : w.normals) branches.push_back(print_term(pr_term(n)));
    emit_json(out, {{"canonical", print_weak_canonical(w)}, {"monad", prob_monad_name(w.monad)}, {"branches", branches}});
  } else {
    out << print_weak_canonical(w) << "\n";
  }
  return kExitOk;
}

struct Pair {
  Loaded a, b;
};

Pair load_pair(const Common& common, const std::string& fa, const std::string& fb) {
  Pair p{load(fa, common.mode), load(fb, common.mode)};
  if (p.a.mode != p.b.mode) throw UsageError(fa + " and " + fb + " are in different modes");
  if (!type_equal(p.a.type, p.b.type))
    throw UsageError(fa + " has type " + print_type(p.a.type) + " but " + fb + " has type " + print_type(p.b.type));
  return p;
}

// A reward table at which the two programs denote differently, if sampling finds one.
template <class M>
std::optional<RewardTable> refute(const Pair& p, std::uint64_t seed) {
  std::vector<RewardTable> tables;
  try {
    Generator g(default_gen_config(p.a.mode, seed));
    tables = g.gammas(p.a.type, kRefutationGammas, p.a.program.sig);
  } catch (const DomainError&) {
    tables = {zero_table()};
  }
  SelComp<M> da = denote_program<M>(p.a.program.term), db = denote_program<M>(p.b.program.term);
  for (const auto& t : tables)
    if (!(da(gamma_of<M>(t)) == db(gamma_of<M>(t)))) return t;
  return std::nullopt;
}

int report_equiv(std::ostream& out, bool as_json, std::optional<bool> equal, json detail, const std::string& text) {
  if (as_json) {
    detail["equivalent"] = equal ? json(*equal) : json(nullptr);
    emit_json(out, detail);
  } else {
    out << text << "\n";
  }
  if (!equal) return kExitIndeterminate;
  return *equal ? kExitOk : kExitNegative;
}

int cmd_equiv(const Common& common, const std::string& fa, const std::string& fb, std::uint64_t seed, std::ostream& out) {
  Pair p = load_pair(common, fa, fb);
  const TermPtr &m = p.a.program.term, &n = p.b.program.term;
  if (p.a.mode == Mode::Rewards) {
    if (!common.monad.empty() && common.monad != "W") throw UsageError("rewards-mode programs are compared in W");
    if (is_base(p.a.type)) {
      if (decide_equiv_rewards(m, n)) return report_equiv(out, common.json, true, json::object(), "equivalent");
      Context k = distinguish_rewards(canon_rewards(m), canon_rewards(n), p.a.type);
      return report_equiv(out, common.json, false, {{"context", k.print()}}, "different\ncontext: " + k.print());
    }
    if (auto t = refute<WMonad>(p, seed))
      return report_equiv(out, common.json, false, {{"gamma", reward_table_json(*t)}}, "different\ngamma: " + t->describe());
    return report_equiv(out, common.json, std::nullopt, json::object(), "unknown");
  }
  ProbMonad monad = prob_monad_flag(common.monad);
  if (is_base(p.a.type)) {
    WeakCanonicalForm wa = weak_canon_prob(m, monad), wb = weak_canon_prob(n, monad);
    if (wa.normals == wb.normals) return report_equiv(out, common.json, true, json::object(), "equivalent");
  }
  auto found = [&]() -> std::optional<RewardTable> {
    switch (monad) {
      case ProbMonad::T1: return refute<DWMonad>(p, seed);
      case ProbMonad::T2: return refute<T2Monad>(p, seed);
      case ProbMonad::T3: return refute<T3Monad>(p, seed);
    }
    return std::nullopt;
  }();
  if (found)
    return report_equiv(out, common.json, false, {{"gamma", reward_table_json(*found)}}, "different\ngamma: " + found->describe());
  return report_equiv(out, common.json, std::nullopt, json::object(), "unknown");
}

int cmd_pure(const Common& common, const std::string& file, std::ostream& out) {
  Loaded l = load(file, common.mode);
  if (!is_base(l.type)) throw UsageError("purity is decided at base types; " + file + " has type " + print_type(l.type));
  std::optional<Const> value;
  std::optional<RewardTable> witness;
  if (l.mode == Mode::Rewards) {
    if (!common.monad.empty() && common.monad != "W") throw UsageError("rewards-mode programs are judged in W");
    value = decide_pure_rewards(l.program.term);
    if (!value) witness = purity_witness_rewards(l.program.term);
  } else {
    PurityVerdict v = decide_pure_prob(l.program.term, prob_monad_flag(common.monad));
    value = v.pure;
    witness = v.witness;
  }
  if (common.json) {
    json j = {{"pure", value.has_value()}};
    if (value) j["value"] = print_const(*value);
    if (witness) j["witness"] = json::parse(reward_table_json(*witness));
    emit_json(out, j);
  } else if (value) {
    out << "pure " << print_const(*value) << "\n";
  } else {
    out << "impure\n";
    if (witness) out << "witness: " << witness->describe() << "\n";
  }
  return value ? kExitOk : kExitNegative;
}

int cmd_distinguish(const Common& common, const std::string& fa, const std::string& fb, std::ostream& out) {
  Pair p = load_pair(common, fa, fb);
  if (p.a.mode != Mode::Rewards) throw UsageError("separating contexts are synthesized for rewards-mode programs only");
  if (!is_base(p.a.type)) throw UsageError("separating contexts are synthesized at base types only");
  const TermPtr &m = p.a.program.term, &n = p.b.program.term;
  if (decide_equiv_rewards(m, n)) {
    if (common.json)
      emit_json(out, {{"equivalent", true}});
    else
      out << "equivalent; no context separates them\n";
    return kExitNegative;
  }
  Context k = distinguish_rewards(canon_rewards(m), canon_rewards(n), p.a.type);
  auto x = observe<WMonad>(k.plug(m)), y = observe<WMonad>(k.plug(n));
  if (common.json) {
    emit_json(out, {{"equivalent", false}, {"context", k.print()}, {"first", value_json(x)}, {"second", value_json(y)}});
  } else {
    out << k.print() << "\n";
    out << "first: ";
    print_value(out, x);
    out << "second: ";
    print_value(out, y);
  }
  return kExitOk;
}

struct GenOptions {
  std::uint64_t seed = 1;
  std::size_t size = 40;
  std::size_t count = 1;
  int order = 2;
  std::string type = "Bool";
};

int cmd_gen(const Common& common, const GenOptions& o, std::ostream& out) {
  Mode mode = common.mode.empty() ? Mode::Rewards : mode_from_flag(common.mode);
  GenConfig cfg = default_gen_config(mode, o.seed);
  cfg.max_term_size = o.size;
  cfg.max_order = o.order;
  Generator g(cfg);
  TypePtr t = parse_type(o.type);
  json programs = json::array();
  for (std::size_t i = 0; i < o.count; ++i) {
    std::string text = print_term(g.program(t));
    if (common.json)
      programs.push_back(text);
    else
      out << text << "\n";
  }
  if (common.json) emit_json(out, {{"programs", programs}, {"mode", mode_name(mode)}, {"type", print_type(t)}});
  return kExitOk;
}

struct CheckOptions {
  std::vector<std::string> names;
  std::uint64_t seed = 42;
  std::optional<std::size_t> cases;
  std::size_t gammas = 64;
  unsigned threads = 0;
  bool list = false;
};

std::vector<std::string> resolve_suites(const Common& common, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& s : suites()) out.push_back(s.name);
    } else if (name == "adequacy") {
      Mode mode = common.mode.empty() ? Mode::Rewards : mode_from_flag(common.mode);
      if (mode == Mode::Rewards) {
        out.push_back("adequacy-rewards");
      } else if (!common.monad.empty()) {
        out.push_back(std::string("adequacy-prob-") + prob_monad_name(prob_monad_flag(common.monad)));
      } else {
        for (const char* m : {"T1", "T2", "T3"}) out.push_back(std::string("adequacy-prob-") + m);
      }
    } else {
      try {
        find_suite(name);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
      out.push_back(name);
    }
  }
  return out;
}

int cmd_check(const Common& common, const CheckOptions& o, std::ostream& out, std::ostream& err) {
  if (o.list) {
    for (const auto& s : suites()) out << s.name << " (" << s.default_cases << " cases): " << s.description << "\n";
    return kExitOk;
  }
  if (o.names.empty()) throw UsageError("check needs --suite NAME (or --list)");
  SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.cases = o.cases;
  cfg.gammas = o.gammas;
  cfg.threads = o.threads;
  if (o.cases && *o.cases == 0) err << "warning: --cases 0 runs nothing; every suite passes vacuously\n";
  bool all_ok = true;
  json results = json::array();
  for (const auto& name : resolve_suites(common, o.names)) {
    SuiteResult r = run_suite(name, cfg);
    all_ok = all_ok && r.ok();
    if (common.json) {
      results.push_back({{"name", r.name},
                         {"passed", r.passed},
                         {"total", r.total},
                         {"ok", r.ok()},
                         {"seconds", r.seconds},
                         {"failures", r.failures},
                         {"notes", r.notes},
                         {"metrics", r.metrics}});
    } else {
      out << format_report(r) << std::flush;
    }
  }
  if (common.json) emit_json(out, {{"suites", results}, {"seed", o.seed}});
  return all_ok ? kExitOk : kExitNegative;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate, compare and test programs of the selection calculus", "selcalc"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  std::string structure = structure_name(Structure::AddRationals);
  app.add_option("--structure", structure, "reward structure: add, nonneg-add or mul-positive")->capture_default_str();
  app.add_flag("--json", common.json, "machine-readable output");

  auto add_mode = [&](CLI::App* sub) { sub->add_option("--mode", common.mode, "rewards or prob; must agree with the file's prelude"); };
  auto add_monad = [&](CLI::App* sub) { sub->add_option("--monad", common.monad, "W, DW (T1), T2 or T3"); };

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a program");
  eval_cmd->add_option("file", eval.file, "program file")->required();
  eval_cmd->add_option("--semantics", eval.semantics, "ordinary, selection, denotational or observe")->capture_default_str();
  eval_cmd->add_option("--gamma", eval.gamma, "reward table: zero or a JSON file");
  eval_cmd->add_flag("--trace", eval.trace, "print every small step");
  eval_cmd->add_flag("--oracle", eval.oracle, "select by enumerating strategies");
  add_mode(eval_cmd);
  add_monad(eval_cmd);

  std::string canon_file;
  CLI::App* canon_cmd = app.add_subcommand("canon", "print the canonical form of a program");
  canon_cmd->add_option("file", canon_file, "program file")->required();
  add_mode(canon_cmd);
  add_monad(canon_cmd);

  std::string first, second;
  std::uint64_t equiv_seed = 1;
  CLI::App* equiv_cmd = app.add_subcommand("equiv", "decide whether two programs are equivalent");
  equiv_cmd->add_option("a", first, "first program")->required();
  equiv_cmd->add_option("b", second, "second program")->required();
  equiv_cmd->add_option("--seed", equiv_seed, "seed for sampled reward tables")->capture_default_str();
  add_mode(equiv_cmd);
  add_monad(equiv_cmd);

  std::string pure_file;
  CLI::App* pure_cmd = app.add_subcommand("pure", "decide whether a program is pure");
  pure_cmd->add_option("file", pure_file, "program file")->required();
  add_mode(pure_cmd);
  add_monad(pure_cmd);

  CLI::App* dist_cmd = app.add_subcommand("distinguish", "print a context separating two programs");
  dist_cmd->add_option("a", first, "first program")->required();
  dist_cmd->add_option("b", second, "second program")->required();
  add_mode(dist_cmd);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate random programs, one per line");
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--size", gen.size, "node bound")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--count", gen.count)->capture_default_str();
  gen_cmd->add_option("--order", gen.order, "type rank bound")->capture_default_str()->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--type", gen.type)->capture_default_str();
  add_mode(gen_cmd);

  CheckOptions check;
  std::size_t cases = 0;
  CLI::App* check_cmd = app.add_subcommand("check", "run property suites");
  check_cmd->add_option("--suite", check.names, "suite name, 'adequacy' or 'all'");
  check_cmd->add_option("--seed", check.seed)->capture_default_str();
  CLI::Option* cases_opt = check_cmd->add_option("--cases", cases, "cases per suite (default: the suite's own)");
  check_cmd->add_option("--gammas", check.gammas, "reward tables per denotational check")->capture_default_str();
  check_cmd->add_option("--threads", check.threads, "worker threads (0: all cores)")->capture_default_str();
  check_cmd->add_flag("--list", check.list, "list the suites");
  add_mode(check_cmd);
  add_monad(check_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "selcalc: " << e.what() << "\n";
    return kExitUsage;
  }
  if (cases_opt->count() > 0) check.cases = cases;

  try {
    StructureScope scope(structure_from_name(structure));
    if (eval_cmd->parsed()) return cmd_eval(common, eval, out);
    if (canon_cmd->parsed()) return cmd_canon(common, canon_file, out);
    if (equiv_cmd->parsed()) return cmd_equiv(common, first, second, equiv_seed, out);
    if (pure_cmd->parsed()) return cmd_pure(common, pure_file, out);
    if (dist_cmd->parsed()) return cmd_distinguish(common, first, second, out);
    if (gen_cmd->parsed()) return cmd_gen(common, gen, out);
    if (check_cmd->parsed()) return cmd_check(common, check, out, err);
    err << "selcalc: no command\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "selcalc: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const CapExceeded& e) {
    err << "selcalc: " << e.what() << "\n";
    return kExitIndeterminate;
  } catch (const Error& e) {
    err << "selcalc: " << e.what() << "\n";
    return std::string_view(e.what()).rfind("internal", 0) == 0 ? kExitInternal : kExitUsage;
  } catch (const std::exception& e) {
    err << "selcalc: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace selcalc
