// Acceptance checks: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "selcalc/equations.hpp"
#include "selcalc/selection.hpp"
#include "selcalc/show.hpp"
#include "selcalc/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace selcalc;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kGammas = 64;

constexpr double kExampleSeconds = 0.010;
constexpr double kAdequacyRewardsSeconds = 30;
constexpr double kAdequacyProbSeconds = 60;
constexpr double kLocalSeconds = 60;
constexpr double kStructureSeconds = 90;

constexpr std::size_t kAdequacyRewardsCases = 500;
constexpr std::size_t kAdequacyProbCases = 300;
constexpr std::size_t kLocalCases = 300;
constexpr std::size_t kMinForcedTies = 30;
constexpr std::size_t kInstancesPerAxiom = 100;
constexpr std::size_t kEquivCases = 200;
constexpr std::size_t kPurityRewardsCases = 200;
constexpr std::size_t kPurityProbCasesPerMonad = 200;
constexpr std::size_t kMonadLawCases = 1000;
constexpr std::size_t kThetaCases = 500;
constexpr std::size_t kInjectivityCasesPerMonad = 500;
constexpr std::size_t kCharBoolCasesPerMonad = 200;
constexpr std::size_t kOrLawCases = 200;
constexpr std::size_t kArgmaxCases = 500;

struct Check {
  bool ok = true;
  std::vector<std::string> problems;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      problems.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

TermPtr T(const char* s) { return parse_term(s); }

SuiteConfig config(std::size_t cases) {
  SuiteConfig cfg;
  cfg.seed = kSeed;
  cfg.cases = cases;
  cfg.gammas = kGammas;
  return cfg;
}

// Runs a suite at an exact case count and requires every case to pass.
SuiteResult require_suite(Check& c, const std::string& name, std::size_t cases) {
  SuiteResult r = run_suite(name, config(cases));
  c.require(r.total == cases, name + " ran " + std::to_string(r.total) + " cases, expected " + std::to_string(cases));
  c.require(r.ok(), format_report(r));
  return r;
}

std::string summary(const SuiteResult& r) {
  return r.name + " " + std::to_string(r.passed) + "/" + std::to_string(r.total);
}

// ------------------------------------------------------------------ criteria

Check example_rewards(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  TermPtr m = T("(5 . tt) or (6 . ff)");
  Outcome selected = select_fast(eval_effect(m));
  std::string den = show(denote_program<WMonad>(m)(zero_gamma<WMonad>()));
  double took = seconds_since(start);
  c.require(show(WMonad::from_dw(selected)) == "<6, ff>", "selected " + show(selected));
  c.require(den == "<6, ff>", "denotation " + den);
  c.require(select_bruteforce(m) == selected, "enumeration disagrees");
  c.require(took < kExampleSeconds, "took " + fmt_seconds(took));
  detail = "selected <6, ff>, denotation " + den + ", " + fmt_seconds(took);
  return c;
}

Check example_prob(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  TermPtr m = T("(5 . tt) or ((5 . tt) +[1/2] (6 . ff))");
  Outcome selected = select_fast(eval_effect(m));
  double took = seconds_since(start);
  c.require(show(selected) == "1/2 <5, tt> + 1/2 <6, ff>", "selected " + show(selected));
  c.require(outcome_reward(selected) == make_rational(11, 2), "expected reward " + to_string(outcome_reward(selected)));
  c.require(select_bruteforce(m) == selected, "enumeration disagrees");
  c.require(show(denote_program<DWMonad>(m)(zero_gamma<DWMonad>())) == show(selected), "denotation disagrees");
  c.require(took < kExampleSeconds, "took " + fmt_seconds(took));
  detail = show(selected) + ", expected reward 11/2, " + fmt_seconds(took);
  return c;
}

Check example_observations(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  TermPtr e2 = T("(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))");
  std::string t1 = show(observe<DWMonad>(e2));
  auto t2v = observe<T2Monad>(e2);
  std::string t3 = show(observe<T3Monad>(e2));
  double took = seconds_since(start);
  c.require(t1 == "1/2 <1, tt> + 1/5 <2, ff> + 3/10 <3, tt>", "T1 " + t1);
  c.require(t3 == "<4/5 tt + 1/5 ff, 9/5>", "T3 " + t3);
  c.require(show(t2v.dist()) == "4/5 tt + 1/5 ff", "T2 distribution " + show(t2v.dist()));
  c.require(t2v.rew(ValueKey{mk_ff()}) == 2, "T2 reward given ff");
  c.require(t2v.rew(ValueKey{mk_tt()}) == make_rational(7, 4), "T2 reward given tt");
  c.require(took < kExampleSeconds, "took " + fmt_seconds(took));
  detail = "T1 " + t1 + "; T2 " + show(t2v) + "; T3 " + t3 + ", " + fmt_seconds(took);
  return c;
}

Check adequacy_rewards(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  SuiteResult r = require_suite(c, "adequacy-rewards", kAdequacyRewardsCases);
  double took = seconds_since(start);
  c.require(took < kAdequacyRewardsSeconds, "took " + fmt_seconds(took));
  detail = summary(r) + ", " + fmt_seconds(took);
  return c;
}

Check adequacy_prob(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  std::size_t passed = 0;
  for (const char* name : {"adequacy-prob-T1", "adequacy-prob-T2", "adequacy-prob-T3"})
    passed += require_suite(c, name, kAdequacyProbCases).passed;
  double took = seconds_since(start);
  c.require(took < kAdequacyProbSeconds, "took " + fmt_seconds(took));
  detail = std::to_string(passed) + "/" + std::to_string(3 * kAdequacyProbCases) + ", " + fmt_seconds(took);
  return c;
}

Check local_characterization(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  SuiteResult r = require_suite(c, "local-vs-brute", kLocalCases);
  double took = seconds_since(start);
  std::uint64_t ties = r.metrics.count("forced ties") ? r.metrics.at("forced ties") : 0;
  c.require(ties >= kMinForcedTies, "only " + std::to_string(ties) + " forced ties");
  c.require(took < kLocalSeconds, "took " + fmt_seconds(took));
  detail = summary(r) + ", " + std::to_string(ties) + " forced ties, " + fmt_seconds(took);
  return c;
}

Check axiom_soundness(std::string& detail) {
  Check c;
  std::size_t rewards = 0, prob = 0;
  for (const auto& a : axiom_catalog()) {
    bool is_rewards = a.family == AxiomFamily::Rewards || a.family == AxiomFamily::RewardsDerived;
    (is_rewards ? rewards : prob) += 1;
  }
  for (const char* name : {"R1", "R2", "R3", "PR1", "PR2", "PR3", "PR4"}) {
    bool found = false;
    for (const auto& a : axiom_catalog()) found = found || a.name == name;
    c.require(found, std::string("missing derived rule ") + name);
  }
  SuiteResult f3 = require_suite(c, "axioms-fig3", kInstancesPerAxiom * rewards);
  SuiteResult f4 = require_suite(c, "axioms-fig4", kInstancesPerAxiom * prob);
  detail = summary(f3) + " (" + std::to_string(rewards) + " axioms), " + summary(f4) + " (" + std::to_string(prob) +
           " axioms)";
  return c;
}

Check equivalence_round_trip(std::string& detail) {
  Check c;
  SuiteResult r = require_suite(c, "equiv-roundtrip", kEquivCases);
  detail = summary(r);
  for (const auto& [k, v] : r.metrics) detail += ", " + k + " " + std::to_string(v);
  return c;
}

template <class M>
bool is_unit_denotation(const TVal<M>& v) {
  for (const Const& x : {tt_const(), ff_const()})
    if (v == M::unit(SemVal<M>::base(x))) return true;
  return false;
}

template <class M>
void check_counterexample(Check& c, ProbMonad m) {
  TermPtr counter = T("ff or ((-1) . (tt +[1/2] ff))");
  PurityVerdict v = decide_pure_prob(counter, m);
  std::string name = prob_monad_name(m);
  c.require(!v.pure, name + " declares the counterexample pure");
  c.require(v.witness.has_value(), name + " emits no witness");
  if (!v.witness) return;
  auto at = denote_program<M>(counter)(gamma_of<M>(*v.witness));
  c.require(!is_unit_denotation<M>(at), name + " witness " + v.witness->describe() + " gives the unit " + show(at));
}

Check purity(std::string& detail) {
  Check c;
  SuiteResult rew = require_suite(c, "purity-rewards", kPurityRewardsCases);
  SuiteResult prob = require_suite(c, "purity-prob", 3 * kPurityProbCasesPerMonad);
  check_counterexample<DWMonad>(c, ProbMonad::T1);
  check_counterexample<T2Monad>(c, ProbMonad::T2);
  check_counterexample<T3Monad>(c, ProbMonad::T3);
  detail = summary(rew) + ", " + summary(prob) + ", counterexample impure with verified witnesses in T1/T2/T3";
  return c;
}

Check structure_laws(std::string& detail) {
  Check c;
  auto start = std::chrono::steady_clock::now();
  std::vector<SuiteResult> rs;
  rs.push_back(require_suite(c, "monad-laws", kMonadLawCases));
  rs.push_back(require_suite(c, "theta-morphism", kThetaCases));
  rs.push_back(require_suite(c, "k-gamma-injective", 4 * kInjectivityCasesPerMonad));
  rs.push_back(require_suite(c, "char-bool", 4 * kCharBoolCasesPerMonad));
  SuiteResult ors = require_suite(c, "genax-or", kOrLawCases);
  c.require(ors.metrics.count("non-commutativity witnesses") == 1, "stored non-commutativity witness not checked");
  rs.push_back(ors);
  rs.push_back(require_suite(c, "argmax-lemmas", kArgmaxCases));
  double took = seconds_since(start);
  c.require(took < kStructureSeconds, "took " + fmt_seconds(took));
  for (const auto& r : rs) detail += summary(r) + ", ";
  detail += fmt_seconds(took);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Check(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"rewards example selects <6, ff>", example_rewards},
      {"probabilistic example selects the right branch", example_prob},
      {"observations of the running example", example_observations},
      {"adequacy, rewards calculus", adequacy_rewards},
      {"adequacy, probabilistic calculus", adequacy_prob},
      {"local selection equals enumeration", local_characterization},
      {"axiom soundness", axiom_soundness},
      {"equivalence round trip", equivalence_round_trip},
      {"purity decisions", purity},
      {"structure laws", structure_laws},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    Check c;
    try {
      c = criteria[i].run(detail);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " " << (i + 1) << ". " << criteria[i].title;
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << "\n";
    for (const auto& p : c.problems) std::cout << "    " << p << "\n";
    std::cout.flush();
    if (!c.ok) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
