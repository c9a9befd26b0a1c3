#pragma once

#include "selcalc/equations.hpp"
#include "selcalc/gamma.hpp"
#include "selcalc/monads.hpp"
#include "selcalc/syntax.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace selcalc {

struct GenConfig {
  std::uint64_t seed = 1;
  std::size_t max_term_size = 40;
  int max_order = 2;
  Mode mode = Mode::Rewards;
  std::vector<Reward> reward_pool;
  std::vector<Rational> prob_pool;
};

// {-3..3, +-1/2, +-1/3} and {1/2, 1/3, 2/3, 1/4, 3/4, 2/5}.
GenConfig default_gen_config(Mode mode, std::uint64_t seed = 1);
void validate(const GenConfig& cfg);

// Printed values of a finite carrier (base types, Unit, and products of them).
std::vector<std::string> carrier_keys(const TypePtr& t, const Signature& sig = Signature());

class Generator {
 public:
  explicit Generator(GenConfig cfg);

  const GenConfig& config() const { return cfg_; }
  std::mt19937_64& rng() { return rng_; }

  // Closed program of the target type, at most max_term_size nodes.
  TermPtr program(const TypePtr& target);

  // Closed term of the given type built from a node budget of roughly `budget`.
  TermPtr term(const TypePtr& t, std::size_t budget);

  // A closed context let x = [-] in N with N of the result type; with `wrap`, sometimes under an or/reward/pchoice.
  Context context(const TypePtr& hole_type, const TypePtr& result_type, std::size_t budget, bool wrap = true);

  // Effect value over tt/ff with at most `nodes` or/pchoice nodes.
  TermPtr effect_value(std::size_t nodes);

  // E or E', where E' swaps tt and ff, so both branches tie.
  TermPtr tied_effect_value(std::size_t nodes);

  // `count` tables over the type's carrier; the first is the zero table.
  std::vector<RewardTable> gammas(const TypePtr& t, std::size_t count, const Signature& sig = Signature());

  Reward reward();
  Rational prob();
  std::size_t below(std::size_t n);
  bool coin(double p = 0.5);

  // A random type of rank at most max_order.
  TypePtr type(int depth = 2);

  // Node counts by constructor over every program generated so far.
  const std::map<std::string, std::uint64_t>& coverage() const { return coverage_; }

  // Random weights summing to one.
  std::vector<Rational> partition(std::size_t n);

 private:
  struct Binding {
    std::string name;
    TypePtr type;
  };
  using Env = std::vector<Binding>;

  TermPtr gen(const TypePtr& t, const Env& env, std::size_t budget);
  TermPtr leaf(const TypePtr& t, const Env& env);
  TermPtr closed_value(const TypePtr& t);
  TermPtr amount(const Env& env);
  TypePtr small_type();
  std::string fresh();
  void count(const std::string& what) { ++coverage_[what]; }

  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::map<std::string, std::uint64_t> coverage_;
  std::uint64_t names_ = 0;
};

TermPtr gen_program(const GenConfig& cfg, const TypePtr& target);
std::vector<RewardTable> gen_gamma(const GenConfig& cfg, const TypePtr& t, std::size_t count);

// Swaps tt and ff at the leaves of an effect value.
TermPtr swap_booleans(const TermPtr& effect);

// ------------------------------------------------------------ monad values

template <class A>
Dist<A> random_dist(Generator& g, const std::vector<A>& carrier) {
  std::size_t n = 1 + g.below(std::min<std::size_t>(3, carrier.size()));
  auto w = g.partition(n);
  std::vector<std::pair<A, Rational>> items;
  for (std::size_t i = 0; i < n; ++i) items.emplace_back(carrier[g.below(carrier.size())], w[i]);
  return make_dist(items);
}

template <class M, class A>
typename M::template V<A> gen_monad_value(Generator& g, const std::vector<A>& carrier) {
  if constexpr (std::is_same_v<M, WMonad>) {
    return WVal<A>{g.reward(), carrier[g.below(carrier.size())]};
  } else if constexpr (std::is_same_v<M, DWMonad>) {
    std::size_t n = 1 + g.below(3);
    auto w = g.partition(n);
    std::vector<std::pair<Rewarded<A>, Rational>> items;
    for (std::size_t i = 0; i < n; ++i) items.emplace_back(Rewarded<A>{g.reward(), carrier[g.below(carrier.size())]}, w[i]);
    return make_dist(items);
  } else if constexpr (std::is_same_v<M, T2Monad>) {
    Dist<A> d = random_dist(g, carrier);
    T2Val<A> v;
    for (const auto& [x, p] : d.atoms) v.atoms.push_back({x, p, g.reward()});
    return v;
  } else if constexpr (std::is_same_v<M, T3Monad>) {
    return T3Val<A>{random_dist(g, carrier), g.reward()};
  } else {
    std::vector<std::pair<A, Reward>> items;
    std::size_t n = 1 + g.below(3);
    for (std::size_t i = 0; i < n; ++i) items.emplace_back(carrier[g.below(carrier.size())], g.reward());
    return MRMonad::join_max(items);
  }
}

// ------------------------------------------------------------ axiom instances

// A closed term whose root matches the named axiom's left-hand side.
TermPtr instantiate_axiom(const std::string& name, Generator& g);

}  // namespace selcalc
