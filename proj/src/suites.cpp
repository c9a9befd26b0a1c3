#include "selcalc/suites.hpp"

#include "selcalc/equations.hpp"
#include "selcalc/selection.hpp"
#include "selcalc/show.hpp"
#include "selcalc/testgen.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

namespace selcalc {

namespace {

// ------------------------------------------------------------------ harness

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t case_seed(std::uint64_t seed, const std::string& suite, std::size_t index) {
  std::uint64_t h = splitmix(seed);
  for (unsigned char c : suite) h = splitmix(h ^ c);
  return splitmix(h ^ static_cast<std::uint64_t>(index));
}

struct Case {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t gammas = 64;
  std::map<std::string, std::uint64_t> counters;

  void bump(const std::string& what, std::uint64_t n = 1) { counters[what] += n; }
};

// Empty when the case passes, otherwise the reason it failed.
using Verdict = std::optional<std::string>;
using CaseFn = std::function<Verdict(Case&)>;

constexpr std::size_t kReportedFailures = 10;

SuiteResult run_cases(const std::string& name, const SuiteConfig& cfg, std::size_t default_cases, const CaseFn& fn) {
  auto start = std::chrono::steady_clock::now();
  SuiteResult result;
  result.name = name;
  std::size_t n = cfg.cases.value_or(default_cases);
  result.total = n;
  if (n == 0) result.notes.push_back("warning: no cases were run; the pass is vacuous");

  std::vector<Verdict> verdicts(n);
  std::vector<std::map<std::string, std::uint64_t>> counters(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      Case c;
      c.index = i;
      c.seed = case_seed(cfg.seed, name, i);
      c.gammas = cfg.gammas;
      try {
        verdicts[i] = fn(c);
      } catch (const std::exception& e) {
        verdicts[i] = std::string("exception: ") + e.what();
      }
      counters[i] = std::move(c.counters);
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [k, v] : counters[i]) result.metrics[k] += v;
    if (!verdicts[i]) {
      ++result.passed;
    } else if (result.failures.size() < kReportedFailures) {
      result.failures.push_back("case " + std::to_string(i) + " (seed " + std::to_string(case_seed(cfg.seed, name, i)) +
                                "): " + *verdicts[i]);
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// ------------------------------------------------------------ semantic helpers

template <class M>
TVal<M> den(const TermPtr& program, const RewardTable& g) {
  return denote_program<M>(program)(gamma_of<M>(g));
}

template <class M>
std::optional<SemVal<M>> unit_value(const TVal<M>& u) {
  if constexpr (std::is_same_v<M, WMonad>) {
    if (u.reward == reward_zero()) return u.value;
  } else if constexpr (std::is_same_v<M, DWMonad>) {
    if (u.atoms.size() == 1 && u.atoms[0].first.reward == reward_zero()) return u.atoms[0].first.value;
  } else if constexpr (std::is_same_v<M, T2Monad>) {
    if (u.atoms.size() == 1 && u.atoms[0].rew == reward_zero()) return u.atoms[0].value;
  } else {
    if (u.dist.atoms.size() == 1 && u.rew == reward_zero()) return u.dist.atoms[0].first;
  }
  return std::nullopt;
}

template <class M>
Verdict same_denotation(const TermPtr& a, const TermPtr& b, const std::vector<RewardTable>& gammas) {
  SelComp<M> da = denote_program<M>(a), db = denote_program<M>(b);
  for (const auto& g : gammas) {
    TVal<M> x = da(gamma_of<M>(g)), y = db(gamma_of<M>(g));
    if (!(x == y))
      return std::string(M::name) + " denotations differ at " + g.describe() + ": " + show(x) + " vs " + show(y) +
             " for " + print_term(a) + " and " + print_term(b);
  }
  return std::nullopt;
}

Verdict same_selection(const TermPtr& a, const TermPtr& b) {
  Outcome x = select_fast(eval_effect(a)), y = select_fast(eval_effect(b));
  if (x == y) return std::nullopt;
  return "selected outcomes differ: " + show(x) + " vs " + show(y) + " for " + print_term(a) + " and " + print_term(b);
}

template <class M>
Verdict same_observation(const TermPtr& a, const TermPtr& b) {
  auto x = observe<M>(a), y = observe<M>(b);
  if (x == y) return std::nullopt;
  return std::string(M::name) + " observations differ: " + show(x) + " vs " + show(y) + " for " + print_term(a) +
         " and " + print_term(b);
}

// Runs f with a value of the monad type for the given probabilistic monad.
template <class F>
Verdict with_prob_monad(ProbMonad m, F&& f) {
  switch (m) {
    case ProbMonad::T1: return f(DWMonad{});
    case ProbMonad::T2: return f(T2Monad{});
    case ProbMonad::T3: return f(T3Monad{});
  }
  return std::nullopt;
}

ProbMonad prob_monad_at(std::size_t i) { return static_cast<ProbMonad>(i % 3); }

TypePtr data_type(Generator& g) {
  switch (g.below(20)) {
    case 0:
    case 1:
    case 2: return prod_type(bool_type(), bool_type());
    case 3:
    case 4:
    case 5:
    case 6:
    case 7: return rew_type();
    default: return bool_type();
  }
}

Verdict check_type(const TermPtr& p, const TypePtr& expected, Mode mode) {
  TypePtr got = typecheck(Signature(), p, mode);
  if (type_equal(got, expected)) return std::nullopt;
  return "program has type " + print_type(got) + ", expected " + print_type(expected) + ": " + print_term(p);
}

const std::vector<Const>& bool_carrier() {
  static const std::vector<Const> u = {tt_const(), ff_const()};
  return u;
}

// k_gamma(E(gamma)) equals the denotation at zero of K applied to E.
template <class M>
Verdict kappa_check(const TermPtr& program, const RewardTable& g) {
  TVal<M> lhs = k_gamma<M, SemVal<M>>(gamma_of<M>(g), den<M>(program, g));
  TVal<M> rhs = den<M>(mk_app(kappa_program(bool_carrier(), g, bool_type()), program), zero_table());
  if (lhs == rhs) return std::nullopt;
  return std::string(M::name) + " reward addition at " + g.describe() + " gives " + show(lhs) +
         " but the dispatcher program gives " + show(rhs) + " for " + print_term(program);
}

#define SELCALC_CHECK(expr)        \
  do {                             \
    if (Verdict v_ = (expr)) return v_; \
  } while (0)

// ----------------------------------------------------------------- adequacy

constexpr std::size_t kAdequacyGammas = 8;

template <class M>
Verdict adequacy_case(Case& c, Mode mode) {
  Generator g(default_gen_config(mode, c.seed));
  TypePtr t = data_type(g);
  TermPtr p = g.program(t);
  for (const auto& [k, v] : g.coverage()) c.bump("generated " + k, v);
  SELCALC_CHECK(check_type(p, t, mode));
  TermPtr effect = eval_effect(p);
  TVal<M> at_zero = den<M>(p, zero_table());
  TVal<M> lifted = lift_outcome<M>(select_fast(effect));
  if (!(at_zero == lifted))
    return std::string(M::name) + " denotation at zero is " + show(at_zero) + " but the selected outcome is " +
           show(lifted) + " for " + print_term(p);
  auto gammas = g.gammas(t, std::min(c.gammas, kAdequacyGammas));
  SELCALC_CHECK(same_denotation<M>(p, effect, gammas));
  if (type_equal(t, bool_type()))
    for (const auto& gm : gammas) SELCALC_CHECK(kappa_check<M>(p, gm));
  return std::nullopt;
}

// ------------------------------------------------------------ local vs brute

constexpr std::size_t kChoiceNodes = 12;

Verdict local_vs_brute_case(Case& c) {
  Mode mode = c.index % 2 ? Mode::Prob : Mode::Rewards;
  Generator g(default_gen_config(mode, c.seed));
  bool forced_tie = c.index % 5 == 0;
  TermPtr e = forced_tie ? g.tied_effect_value(kChoiceNodes) : g.effect_value(kChoiceNodes);
  Outcome fast = select_fast(e);
  Selection brute = select_bruteforce_effect(e);
  if (!(fast == brute.result))
    return "local selection " + show(fast) + " differs from enumeration " + show(brute.result) + " on " + print_term(e);

  Reward best = outcome_reward(brute.result);
  std::size_t maximizers = 0;
  std::optional<std::uint64_t> first;
  std::uint64_t index = 0;
  Verdict beaten;
  for_each_strategy(e, [&](const StrategyPtr& s) {
    Reward r = strategy_reward(s, e);
    if (less(best, r)) {
      beaten = "strategy " + print_strategy(s) + " beats the selected one on " + print_term(e);
      return false;
    }
    if (r == best) {
      ++maximizers;
      if (!first) first = index;
    }
    ++index;
    return true;
  });
  if (beaten) return beaten;
  if (first != brute.index)
    return "selected strategy index " + std::to_string(brute.index) + " is not the least maximizer " +
           std::to_string(*first) + " on " + print_term(e);
  if (maximizers > 1) c.bump("cases with several maximizing strategies");
  if (forced_tie) {
    c.bump("forced ties");
    if (brute.strategy->kind != StrategyKind::Left)
      return "forced tie resolved to " + print_strategy(brute.strategy) + " instead of the left branch on " +
             print_term(e);
  }
  return std::nullopt;
}

// --------------------------------------------------------------- monad laws

const std::vector<int> kSmallCarrier = {0, 1, 2, 3};

template <class M>
Verdict monad_laws_for(Generator& g) {
  using V = typename M::template V<int>;
  auto table = [&] {
    std::map<int, V> t;
    for (int x : kSmallCarrier) t.emplace(x, gen_monad_value<M, int>(g, kSmallCarrier));
    return t;
  };
  auto f = table(), h = table();
  V m = gen_monad_value<M, int>(g, kSmallCarrier);
  int a = kSmallCarrier[g.below(kSmallCarrier.size())];
  auto F = [&](const int& x) { return f.at(x); };
  auto H = [&](const int& x) { return h.at(x); };
  auto unit = [](const int& x) { return M::template unit<int>(x); };
  std::string where = std::string(M::name) + " ";
  if (!(M::bind(M::unit(a), F) == f.at(a))) return where + "left unit law fails at " + show(a);
  if (!(M::bind(m, unit) == m)) return where + "right unit law fails at " + show(m);
  V lhs = M::bind(M::bind(m, F), H);
  V rhs = M::bind(m, [&](const int& x) { return M::bind(F(x), H); });
  if (!(lhs == rhs)) return where + "associativity fails: " + show(lhs) + " vs " + show(rhs);
  return std::nullopt;
}

Verdict monad_laws_case(Case& c) {
  Generator g(default_gen_config(Mode::Prob, c.seed));
  SELCALC_CHECK(monad_laws_for<WMonad>(g));
  SELCALC_CHECK(monad_laws_for<DWMonad>(g));
  SELCALC_CHECK(monad_laws_for<T2Monad>(g));
  if (structure_supports_t3())
    SELCALC_CHECK(monad_laws_for<T3Monad>(g));
  else
    c.bump("T3 skipped: gather law fails");
  SELCALC_CHECK(monad_laws_for<MRMonad>(g));
  return std::nullopt;
}

// ---------------------------------------------------------- theta morphism

std::map<int, Reward> int_gamma(Generator& g) {
  std::map<int, Reward> t;
  for (int x : kSmallCarrier) t[x] = g.reward();
  return t;
}

template <class T>
Verdict theta_for(Generator& g) {
  using DW = DWMonad;
  auto u = gen_monad_value<DW, int>(g, kSmallCarrier), v = gen_monad_value<DW, int>(g, kSmallCarrier);
  std::map<int, DWVal<int>> f;
  for (int x : kSmallCarrier) f.emplace(x, gen_monad_value<DW, int>(g, kSmallCarrier));
  int a = kSmallCarrier[g.below(kSmallCarrier.size())];
  Reward r = g.reward();
  Rational p = g.prob();
  std::string where = std::string("theta into ") + T::name + " ";
  if (!(theta<T>(DW::unit(a)) == T::unit(a))) return where + "does not preserve the unit";
  auto bound = theta<T>(DW::bind(u, [&](const int& x) { return f.at(x); }));
  auto composed = T::bind(theta<T>(u), [&](const int& x) { return theta<T>(f.at(x)); });
  if (!(bound == composed)) return where + "does not preserve bind: " + show(bound) + " vs " + show(composed);
  if (!(theta<T>(DW::reward(r, u)) == T::reward(r, theta<T>(u)))) return where + "does not preserve reward " + show(r);
  if (!(theta<T>(DW::pchoice(p, u, v)) == T::pchoice(p, theta<T>(u), theta<T>(v))))
    return where + "does not preserve the choice +[" + show(p) + "]";
  auto gamma = int_gamma(g);
  auto score = [&](const int& x) { return gamma.at(x); };
  if (DW::expect(u, score) != T::expect(theta<T>(u), score)) return where + "does not preserve expected reward";
  return std::nullopt;
}

Verdict theta_case(Case& c) {
  Generator g(default_gen_config(Mode::Prob, c.seed));
  SELCALC_CHECK(theta_for<T2Monad>(g));
  if (structure_supports_t3())
    SELCALC_CHECK(theta_for<T3Monad>(g));
  else
    c.bump("T3 skipped: gather law fails");
  return std::nullopt;
}

// ------------------------------------------------------------------- axioms

std::vector<std::string> axioms_of(std::initializer_list<AxiomFamily> families) {
  std::vector<std::string> out;
  for (const auto& a : axiom_catalog())
    if (std::find(families.begin(), families.end(), a.family) != families.end()) out.push_back(a.name);
  return out;
}

const std::vector<std::string>& rewards_axioms() {
  static const auto v = axioms_of({AxiomFamily::Rewards, AxiomFamily::RewardsDerived});
  return v;
}

const std::vector<std::string>& prob_axioms() {
  static const auto v = axioms_of({AxiomFamily::Prob, AxiomFamily::ProbDerived, AxiomFamily::T2, AxiomFamily::T3});
  return v;
}

AxiomFamily family_of(const std::string& name) {
  for (const auto& a : axiom_catalog())
    if (a.name == name) return a.family;
  throw Error("unknown axiom " + name);
}

constexpr std::size_t kInstancesPerAxiom = 100;

Verdict axiom_case(Case& c, const std::vector<std::string>& names, Mode mode) {
  const std::string& name = names[c.index % names.size()];
  Generator g(default_gen_config(mode, c.seed));
  TermPtr lhs = instantiate_axiom(name, g);
  TypePtr t = typecheck(Signature(), lhs, mode);
  TermPtr rhs = apply_axiom(name, lhs);
  std::string tag = name + ": ";
  auto tagged = [&](Verdict v) -> Verdict {
    if (v) return tag + *v;
    return v;
  };
  SELCALC_CHECK(tagged(check_type(rhs, t, mode)));
  auto gammas = g.gammas(t, c.gammas);
  switch (family_of(name)) {
    case AxiomFamily::Rewards:
    case AxiomFamily::RewardsDerived:
      SELCALC_CHECK(tagged(same_denotation<WMonad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_selection(lhs, rhs)));
      break;
    case AxiomFamily::Prob:
    case AxiomFamily::ProbDerived:
      SELCALC_CHECK(tagged(same_denotation<DWMonad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_denotation<T2Monad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_denotation<T3Monad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_selection(lhs, rhs)));
      break;
    case AxiomFamily::T2:
      SELCALC_CHECK(tagged(same_denotation<T2Monad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_denotation<T3Monad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_observation<T2Monad>(lhs, rhs)));
      SELCALC_CHECK(tagged(same_observation<T3Monad>(lhs, rhs)));
      break;
    case AxiomFamily::T3:
      SELCALC_CHECK(tagged(same_denotation<T3Monad>(lhs, rhs, gammas)));
      SELCALC_CHECK(tagged(same_observation<T3Monad>(lhs, rhs)));
      break;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ or properties

constexpr std::size_t kSubtermBudget = 12;

template <class M>
Verdict or_laws(Generator& g, std::size_t gamma_count) {
  auto sub = [&] { return g.term(bool_type(), 1 + g.below(kSubtermBudget)); };
  TermPtr m = sub(), n = sub(), p = sub();
  auto gammas = g.gammas(bool_type(), gamma_count);
  SELCALC_CHECK(same_denotation<M>(mk_or(m, m), m, gammas));
  SELCALC_CHECK(same_denotation<M>(mk_or(mk_or(m, n), p), mk_or(m, mk_or(n, p)), gammas));
  SELCALC_CHECK(same_denotation<M>(mk_or(m, mk_or(n, m)), mk_or(m, n), gammas));
  SelComp<M> dm = denote_program<M>(m), dn = denote_program<M>(n), both = denote_program<M>(mk_or(m, n));
  for (const auto& gm : gammas) {
    Gamma<M> gamma = gamma_of<M>(gm);
    TVal<M> u = dm(gamma), v = dn(gamma), w = both(gamma);
    const TVal<M>& expected = leq(M::expect(v, gamma), M::expect(u, gamma)) ? u : v;
    if (!(w == expected))
      return "the choice between " + print_term(m) + " and " + print_term(n) + " at " + gm.describe() + " is " +
             show(w) + ", expected the left-biased maximum " + show(expected);
  }
  return std::nullopt;
}

Verdict genax_or_case(Case& c) {
  if (c.index == 0) {
    // The stored witness that choice is not commutative.
    TermPtr a = mk_or(mk_tt(), mk_ff()), b = mk_or(mk_ff(), mk_tt());
    if (!same_denotation<WMonad>(a, b, {zero_table()}))
      return std::string("tt or ff and ff or tt have the same denotation at the zero table");
    c.bump("non-commutativity witnesses");
  }
  bool prob = c.index % 2 == 1;
  Generator g(default_gen_config(prob ? Mode::Prob : Mode::Rewards, c.seed));
  return prob ? or_laws<DWMonad>(g, c.gammas) : or_laws<WMonad>(g, c.gammas);
}

// ---------------------------------------------------------- distributivity

template <class M>
Verdict distributivity_for(Generator& g, std::size_t gamma_count) {
  auto sub = [&] { return g.term(bool_type(), 1 + g.below(kSubtermBudget)); };
  TermPtr m = sub(), n = sub();
  Reward r = g.reward();
  auto gammas = g.gammas(bool_type(), gamma_count);
  SELCALC_CHECK(same_denotation<M>(mk_reward(r, mk_or(m, n)), mk_or(mk_reward(r, m), mk_reward(r, n)), gammas));
  Context k = g.context(bool_type(), bool_type(), 1 + g.below(kSubtermBudget), false);
  SELCALC_CHECK(same_denotation<M>(k.plug(mk_or(m, n)), mk_or(k.plug(m), k.plug(n)), gammas));
  SELCALC_CHECK(same_denotation<M>(k.plug(mk_reward(r, m)), mk_reward(r, k.plug(m)), gammas));
  if constexpr (M::probabilistic) {
    Rational p = g.prob();
    SELCALC_CHECK(same_denotation<M>(k.plug(mk_pchoice(p, m, n)), mk_pchoice(p, k.plug(m), k.plug(n)), gammas));
  }
  return std::nullopt;
}

constexpr int kOrderSamples = 16;

Verdict distributivity_case(Case& c) {
  bool prob = c.index % 2 == 1;
  Generator g(default_gen_config(prob ? Mode::Prob : Mode::Rewards, c.seed));
  for (int i = 0; i < kOrderSamples; ++i) {
    Reward r = g.reward(), a = g.reward(), b = g.reward();
    if (leq(a, b) != leq(add(r, a), add(r, b)))
      return "adding " + show(r) + " does not preserve and reflect the order of " + show(a) + " and " + show(b);
  }
  if (!prob) return distributivity_for<WMonad>(g, c.gammas);
  return with_prob_monad(prob_monad_at(c.index / 2),
                         [&](auto tag) { return distributivity_for<decltype(tag)>(g, c.gammas); });
}

// ------------------------------------------------------------ canonical forms

Verdict canon_case(Case& c) {
  bool prob = c.index % 2 == 1;
  Generator g(default_gen_config(prob ? Mode::Prob : Mode::Rewards, c.seed));
  TypePtr t = g.coin(0.8) ? bool_type() : rew_type();
  TermPtr p = g.program(t);
  auto gammas = g.gammas(t, c.gammas);
  if (!prob) {
    CanonicalForm cf = canon_rewards(p);
    TermPtr canon = canonical_term(cf);
    SELCALC_CHECK(same_denotation<WMonad>(p, canon, gammas));
    SELCALC_CHECK(same_selection(p, canon));
    if (!(canon_rewards(canon) == cf)) return "canonical form of " + print_term(canon) + " is not a fixed point";
    c.bump("canonical entries", cf.size());
    return std::nullopt;
  }
  ProbMonad m = prob_monad_at(c.index / 2);
  WeakCanonicalForm w = weak_canon_prob(p, m);
  TermPtr canon = weak_canon_term(w);
  c.bump("weak canonical branches", w.branches.size());
  return with_prob_monad(m, [&](auto tag) { return same_denotation<decltype(tag)>(p, canon, gammas); });
}

// -------------------------------------------------------------- equivalence

constexpr std::size_t kRandomContexts = 20;

// Second program of a pair: equal by construction, or a perturbation that may or may not be equal.
TermPtr partner(Generator& g, const TermPtr& m) {
  switch (g.below(6)) {
    case 0: return canonical_term(canon_rewards(m));
    case 1: return mk_or(m, m);
    case 2: return g.program(bool_type());
    case 3: return mk_reward(g.reward(), m);
    case 4: return swap_booleans(m);
    default: {
      CanonicalForm cf = canon_rewards(m);
      if (cf.size() >= 2)
        std::swap(cf[0], cf[1]);
      else
        cf[0].reward = add(cf[0].reward, g.reward());
      return canonical_term(cf);
    }
  }
}

Verdict equiv_case(Case& c) {
  Generator g(default_gen_config(Mode::Rewards, c.seed));
  TermPtr m = g.program(bool_type());
  TermPtr n = partner(g, m);
  if (decide_equiv_rewards(m, n)) {
    c.bump("equivalent pairs");
    SELCALC_CHECK(same_denotation<WMonad>(m, n, g.gammas(bool_type(), c.gammas)));
    for (std::size_t i = 0; i < kRandomContexts; ++i) {
      Context k = g.context(bool_type(), bool_type(), 1 + g.below(kSubtermBudget));
      SELCALC_CHECK(same_observation<WMonad>(k.plug(m), k.plug(n)));
    }
    return std::nullopt;
  }
  c.bump("inequivalent pairs");
  Context k = distinguish_rewards(canon_rewards(m), canon_rewards(n), bool_type());
  TermPtr km = k.plug(m), kn = k.plug(n);
  SELCALC_CHECK(check_type(km, bool_type(), Mode::Rewards));
  SELCALC_CHECK(check_type(kn, bool_type(), Mode::Rewards));
  auto x = observe<WMonad>(km), y = observe<WMonad>(kn);
  if (x == y)
    return "context " + k.print() + " does not separate " + print_term(m) + " and " + print_term(n) + ": both give " +
           show(x);
  return std::nullopt;
}

// ------------------------------------------------------------------ purity

Reward below_zero_or_zero(Generator& g) {
  for (int i = 0; i < 8; ++i) {
    Reward r = g.reward();
    if (less(r, reward_zero())) return r;
  }
  return reward_zero();
}

// Random programs mixed with shapes that are often pure.
TermPtr purity_candidate(Generator& g) {
  TermPtr c = g.coin() ? mk_tt() : mk_ff();
  auto sub = [&] { return g.term(bool_type(), 1 + g.below(kSubtermBudget)); };
  switch (g.below(4)) {
    case 0: return mk_or(c, mk_reward(below_zero_or_zero(g), mk_if(sub(), c, c)));
    case 1: return mk_reward(reward_zero(), mk_or(c, mk_reward(below_zero_or_zero(g), c)));
    case 2: {
      if (g.config().mode != Mode::Prob) return mk_or(mk_reward(below_zero_or_zero(g), sub()), c);
      return mk_or(c, mk_pchoice(g.prob(), mk_reward(below_zero_or_zero(g), c), mk_reward(below_zero_or_zero(g), sub())));
    }
    default: return g.program(bool_type());
  }
}

template <class M>
Verdict check_pure(const TermPtr& p, const Const& value, const std::vector<RewardTable>& gammas) {
  TVal<M> unit = M::unit(SemVal<M>::base(value));
  SelComp<M> d = denote_program<M>(p);
  for (const auto& g : gammas) {
    TVal<M> u = d(gamma_of<M>(g));
    if (!(u == unit))
      return std::string("declared pure at ") + print_const(value) + " but the " + M::name + " denotation at " +
             g.describe() + " is " + show(u) + " for " + print_term(p);
  }
  return std::nullopt;
}

template <class M>
Verdict check_witness(const TermPtr& p, const RewardTable& witness) {
  TVal<M> at_zero = den<M>(p, zero_table()), at_witness = den<M>(p, witness);
  if (!unit_value<M>(at_witness) || !(at_witness == at_zero)) return std::nullopt;
  return std::string("declared impure but the ") + M::name + " denotation at the witness " + witness.describe() +
         " is the unit " + show(at_witness) + " reached at zero, for " + print_term(p);
}

Verdict purity_rewards_case(Case& c) {
  Generator g(default_gen_config(Mode::Rewards, c.seed));
  TermPtr p = purity_candidate(g);
  if (auto value = decide_pure_rewards(p)) {
    c.bump("pure");
    return check_pure<WMonad>(p, *value, g.gammas(bool_type(), c.gammas));
  }
  c.bump("impure");
  return check_witness<WMonad>(p, purity_witness_rewards(p));
}

// ff or ((-1) . (tt +[1/2] ff)): impure although no single branch reveals it at zero.
TermPtr impure_counterexample() {
  return mk_or(mk_ff(), mk_reward(make_rational(-1), mk_pchoice(make_rational(1, 2), mk_tt(), mk_ff())));
}

Verdict purity_prob_case(Case& c) {
  Generator g(default_gen_config(Mode::Prob, c.seed));
  ProbMonad m = prob_monad_at(c.index);
  bool fixed = c.index < 3;
  TermPtr p = fixed ? impure_counterexample() : purity_candidate(g);
  PurityVerdict verdict = decide_pure_prob(p, m);
  return with_prob_monad(m, [&](auto tag) -> Verdict {
    using M = decltype(tag);
    if (verdict.pure) {
      if (fixed) return std::string("the mixed-branch counterexample was declared pure in ") + M::name;
      c.bump("pure");
      return check_pure<M>(p, *verdict.pure, g.gammas(bool_type(), c.gammas));
    }
    c.bump("impure");
    if (!verdict.witness) return "impure verdict without a witness: " + verdict.reason;
    return check_witness<M>(p, *verdict.witness);
  });
}

// ----------------------------------------------------- reward addition, B

constexpr int kDrawAttempts = 100;

template <class M>
std::pair<typename M::template V<int>, typename M::template V<int>> unequal_pair(Generator& g,
                                                                                  const std::vector<int>& carrier) {
  auto u = gen_monad_value<M, int>(g, carrier);
  for (int i = 0; i < kDrawAttempts; ++i) {
    auto v = gen_monad_value<M, int>(g, carrier);
    if (!(u == v)) return {u, v};
  }
  throw Error("could not draw two unequal " + std::string(M::name) + " values");
}

template <class M>
Verdict k_gamma_for(Case& c, Generator& g) {
  auto [u, v] = unequal_pair<M>(g, kSmallCarrier);
  auto gamma = int_gamma(g);
  auto score = [&](const int& x) { return gamma.at(x); };
  auto ku = k_gamma<M, int>(score, u), kv = k_gamma<M, int>(score, v);
  if (ku == kv)
    return std::string(M::name) + " reward addition identifies " + show(u) + " and " + show(v) + " at " + show(ku);
  TermPtr e = g.effect_value(6);
  auto tables = g.gammas(bool_type(), 2);
  c.bump("dispatcher checks");
  return kappa_check<M>(e, tables[1]);
}

Verdict k_gamma_case(Case& c) {
  switch (c.index % 4) {
    case 0: {
      Generator g(default_gen_config(Mode::Rewards, c.seed));
      return k_gamma_for<WMonad>(c, g);
    }
    default: {
      Generator g(default_gen_config(Mode::Prob, c.seed));
      return with_prob_monad(static_cast<ProbMonad>(c.index % 4 - 1),
                             [&](auto tag) { return k_gamma_for<decltype(tag)>(c, g); });
    }
  }
}

template <class M>
Verdict char_bool_for(Case& c, Generator& g) {
  std::size_t n = 1 + g.below(4);
  std::vector<int> carrier;
  for (std::size_t i = 0; i < n; ++i) carrier.push_back(static_cast<int>(i));
  auto [u, v] = unequal_pair<M>(g, carrier);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    auto h = [mask](const int& x) { return ((mask >> x) & 1u) != 0; };
    if (!(M::map(u, h) == M::map(v, h))) {
      c.bump("separating maps found");
      return std::nullopt;
    }
  }
  return std::string("no boolean map separates the ") + M::name + " values " + show(u) + " and " + show(v);
}

Verdict char_bool_case(Case& c) {
  Generator g(default_gen_config(Mode::Prob, c.seed));
  switch (c.index % 4) {
    case 0: return char_bool_for<WMonad>(c, g);
    case 1: return char_bool_for<DWMonad>(c, g);
    case 2: return char_bool_for<T2Monad>(c, g);
    default: return char_bool_for<T3Monad>(c, g);
  }
}

// ------------------------------------------------------- max-plus semantics

TermPtr commute_ors(Generator& g, const TermPtr& t) {
  TermPtr out = t;
  for (std::size_t i = 0; i < t->arity(); ++i) out = with_child(out, i, commute_ors(g, t->child(i)));
  if (out->kind == TermKind::Op && out->op == OpSym::Or && g.coin()) return mk_or(out->kids[1], out->kids[0]);
  return out;
}

MRVal<ValueKey> max_plus(const TermPtr& p) { return mr_of_effect(eval_effect(p)); }

// let x = [-] in if x == c then big . x else x, with big larger than the spread of both reward maps.
Context reward_probe(const MRVal<ValueKey>& a, const MRVal<ValueKey>& b, const TermPtr& c) {
  std::vector<Reward> rs;
  for (const auto* mr : {&a, &b})
    for (const auto& [x, r] : mr->entries) rs.push_back(r);
  Reward lo = *std::min_element(rs.begin(), rs.end()), hi = *std::max_element(rs.begin(), rs.end());
  Reward big = active_structure() == Structure::MulPositiveRationals ? Reward(2 * hi / lo) : Reward(1 + hi - lo);
  big.canonicalize();
  Context k;
  k.hole = fresh_name("hole");
  k.hole_type = bool_type();
  k.result_type = bool_type();
  std::string x = fresh_name("x");
  k.body = mk_let(x, bool_type(), mk_var(k.hole), mk_if(mk_eq(mk_var(x), c), mk_reward(big, mk_var(x)), mk_var(x)));
  return k;
}

Verdict mr_fullab_case(Case& c) {
  Generator g(default_gen_config(Mode::Rewards, c.seed));
  TermPtr m = g.program(bool_type());
  TermPtr n;
  switch (c.index % 4) {
    case 0:
    case 1: n = commute_ors(g, m); break;
    case 2: n = mk_reward(g.reward(), m); break;
    default: n = g.program(bool_type()); break;
  }
  MRVal<ValueKey> a = max_plus(m), b = max_plus(n);
  if (c.index % 4 < 2 && !(a == b))
    return "commuting choices changed the max-plus denotation: " + show(a) + " vs " + show(b);
  if (a == b) {
    c.bump("equal max-plus denotations");
    for (std::size_t i = 0; i < kRandomContexts; ++i) {
      Context k = g.context(bool_type(), bool_type(), 1 + g.below(kSubtermBudget));
      Reward x = observe<WMonad>(k.plug(m)).reward, y = observe<WMonad>(k.plug(n)).reward;
      if (x != y)
        return "equal max-plus denotations " + show(a) + " but context " + k.print() + " observes rewards " + show(x) +
               " and " + show(y);
    }
    return std::nullopt;
  }
  c.bump("different max-plus denotations");
  std::optional<ValueKey> differing;
  for (const auto* mr : {&a, &b})
    for (const auto& [v, r] : mr->entries) {
      const auto& other = mr == &a ? b : a;
      auto it = std::find_if(other.entries.begin(), other.entries.end(), [&](const auto& e) { return e.first == v; });
      if (!differing && (it == other.entries.end() || it->second != r)) differing = v;
    }
  Context k = reward_probe(a, b, differing->term);
  Reward x = observe<WMonad>(k.plug(m)).reward, y = observe<WMonad>(k.plug(n)).reward;
  if (x == y)
    return "max-plus denotations " + show(a) + " and " + show(b) + " differ but the probe " + k.print() +
           " observes the same reward " + show(x);
  return std::nullopt;
}

// ------------------------------------------------------------------- argmax

Verdict argmax_case(Case& c) {
  Generator g(default_gen_config(Mode::Rewards, c.seed));
  auto indices = [](std::size_t from, std::size_t to) {
    std::vector<std::size_t> v;
    for (std::size_t i = from; i < to; ++i) v.push_back(i);
    return v;
  };

  // Splitting an ordered set into an initial and a final segment.
  std::size_t n = 2 + g.below(7), k = 1 + g.below(n - 1);
  std::vector<Reward> gamma(n);
  for (auto& r : gamma) r = g.reward();
  auto score = [&](std::size_t i) { return gamma[i]; };
  std::size_t whole = argmax_index(indices(0, n), score);
  std::size_t left = argmax_index(indices(0, k), score);
  std::size_t right = k + argmax_index(indices(k, n), score);
  if (max_by(score, left, right) != whole)
    return "argmax over " + std::to_string(n) + " points split at " + std::to_string(k) + " disagrees";

  // Lexicographic products, choosing the inner argmax first.
  std::size_t rows = 1 + g.below(4), cols = 1 + g.below(4);
  std::vector<Reward> table(rows * cols);
  for (auto& r : table) r = g.reward();
  auto at = [&](std::size_t u, std::size_t v) { return table[u * cols + v]; };
  std::size_t best = argmax_index(indices(0, rows * cols), [&](std::size_t i) { return table[i]; });
  auto inner = [&](std::size_t u) { return argmax_index(indices(0, cols), [&](std::size_t v) { return at(u, v); }); };
  std::size_t u = argmax_index(indices(0, rows), [&](std::size_t r) { return at(r, inner(r)); });
  if (u * cols + inner(u) != best)
    return "argmax over a " + std::to_string(rows) + "x" + std::to_string(cols) + " product disagrees with nesting";

  // Mapping through a function commutes with the left-biased maximum.
  std::vector<std::size_t> h(rows);
  for (auto& y : h) y = g.below(n);
  std::size_t a = g.below(rows), b = g.below(rows);
  auto through = [&](std::size_t x) { return gamma[h[x]]; };
  if (h[max_by(through, a, b)] != max_by(score, h[a], h[b])) return std::string("mapping does not commute with max");
  return std::nullopt;
}

// ----------------------------------------------------------------- registry

SuiteInfo make(std::string name, std::string description, std::size_t cases, CaseFn fn) {
  SuiteInfo info{name, std::move(description), cases, nullptr};
  info.run = [name, cases, fn = std::move(fn)](const SuiteConfig& cfg) { return run_cases(name, cfg, cases, fn); };
  return info;
}

std::vector<SuiteInfo> build_registry() {
  std::vector<SuiteInfo> v;
  v.push_back(make("adequacy-rewards", "denotation at the zero table equals the selected outcome (rewards)", 500,
                   [](Case& c) { return adequacy_case<WMonad>(c, Mode::Rewards); }));
  v.push_back(make("adequacy-prob-T1", "denotation at the zero table equals the selected outcome (DW)", 300,
                   [](Case& c) { return adequacy_case<DWMonad>(c, Mode::Prob); }));
  v.push_back(make("adequacy-prob-T2", "denotation at the zero table equals the selected outcome (T2)", 300,
                   [](Case& c) { return adequacy_case<T2Monad>(c, Mode::Prob); }));
  v.push_back(make("adequacy-prob-T3", "denotation at the zero table equals the selected outcome (T3)", 300,
                   [](Case& c) {
                     T3Monad::require_supported();
                     return adequacy_case<T3Monad>(c, Mode::Prob);
                   }));
  v.push_back(make("local-vs-brute", "local selection equals the least maximizing strategy, with forced ties", 300,
                   local_vs_brute_case));
  v.push_back(make("monad-laws", "unit and associativity laws for W, DW, T2, T3 and MR", 1000, monad_laws_case));
  v.push_back(make("theta-morphism", "theta from DW preserves unit, bind, rewards, choice and expectation", 500,
                   theta_case));
  v.push_back(make("axioms-fig3", "rewards-calculus axioms and derived rules", kInstancesPerAxiom * rewards_axioms().size(),
                   [](Case& c) { return axiom_case(c, rewards_axioms(), Mode::Rewards); }));
  v.push_back(make("axioms-fig4", "probabilistic axioms, derived rules and the T2/T3 gathering laws",
                   kInstancesPerAxiom * prob_axioms().size(),
                   [](Case& c) { return axiom_case(c, prob_axioms(), Mode::Prob); }));
  v.push_back(make("genax-or", "choice is idempotent, associative, left-biased and not commutative", 200,
                   genax_or_case));
  v.push_back(make("distributivity", "rewards distribute over choice; operations commute with sequencing", 200,
                   distributivity_case));
  v.push_back(make("canon-sound", "canonical and weak canonical forms denote the original program", 200, canon_case));
  v.push_back(make("equiv-roundtrip", "equivalence decisions agree with semantics and separating contexts", 200,
                   equiv_case));
  v.push_back(make("purity-rewards", "purity decisions in the rewards calculus, with witnesses", 200,
                   purity_rewards_case));
  v.push_back(make("purity-prob", "purity decisions per probabilistic monad, with witnesses", 600, purity_prob_case));
  v.push_back(make("k-gamma-injective", "reward addition is injective; the dispatcher program implements it", 2000,
                   k_gamma_case));
  v.push_back(make("char-bool", "unequal monad values are separated by a boolean map", 800, char_bool_case));
  v.push_back(make("mr-fullab", "max-plus denotations agree exactly when reward observations do", 200,
                   mr_fullab_case));
  v.push_back(make("argmax-lemmas", "argmax over unions, products and images", 500, argmax_case));
  return v;
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> registry = build_registry();
  return registry;
}

const SuiteInfo& find_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return s;
  throw Error("unknown suite '" + name + "'");
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) { return find_suite(name).run(cfg); }

std::string format_report(const SuiteResult& r) {
  std::ostringstream out;
  out << r.name << ": " << r.passed << "/" << r.total << (r.ok() ? " OK" : " FAILED");
  out.setf(std::ios::fixed);
  out.precision(2);
  out << " (" << r.seconds << " s)\n";
  for (const auto& n : r.notes) out << "  note: " << n << "\n";
  for (const auto& [k, v] : r.metrics) out << "  " << k << ": " << v << "\n";
  for (const auto& f : r.failures) out << "  FAIL " << f << "\n";
  return out.str();
}

}  // namespace selcalc
