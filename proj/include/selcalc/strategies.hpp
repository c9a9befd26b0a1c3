#pragma once

#include "selcalc/monads.hpp"
#include "selcalc/syntax.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

namespace selcalc {

enum class StrategyKind { Leaf, Left, Right, Through, Pair };

struct Strategy;
using StrategyPtr = std::shared_ptr<const Strategy>;

struct Strategy {
  StrategyKind kind;
  StrategyPtr first;
  StrategyPtr second;
};

StrategyPtr strategy_leaf();
StrategyPtr strategy_left(StrategyPtr s);
StrategyPtr strategy_right(StrategyPtr s);
StrategyPtr strategy_through(StrategyPtr s);
StrategyPtr strategy_pair(StrategyPtr a, StrategyPtr b);
std::string print_strategy(const StrategyPtr& s);

// Outcomes are distributions over (reward, value); rewards-mode outcomes are Dirac.
using Outcome = DWVal<ValueKey>;

constexpr std::uint64_t kDefaultStrategyCap = std::uint64_t{1} << 20;

class CapExceeded : public Error {
 public:
  using Error::Error;
};

// Number of strategies, saturating at UINT64_MAX.
std::uint64_t count_strategies(const TermPtr& effect);

// Streams Str(E) in ascending strategy order; stop early by returning false from the callback.
void for_each_strategy(const TermPtr& effect, const std::function<bool(const StrategyPtr&)>& visit);

std::vector<StrategyPtr> enumerate_strategies(const TermPtr& effect, std::uint64_t cap = kDefaultStrategyCap);

Outcome outcome(const StrategyPtr& s, const TermPtr& effect);
Reward strategy_reward(const StrategyPtr& s, const TermPtr& effect);

// Expected reward of an outcome; the reward itself for Dirac outcomes.
Reward outcome_reward(const Outcome& o);

// Least index among the maximizers of score.
template <class T, class Score>
std::size_t argmax_index(const std::vector<T>& items, Score&& score) {
  if (items.empty()) throw DomainError("argmax over an empty sequence");
  std::size_t best = 0;
  Reward best_score = score(items[0]);
  for (std::size_t i = 1; i < items.size(); ++i) {
    Reward s = score(items[i]);
    if (less(best_score, s)) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

// Left-biased maximum.
template <class T, class Score>
const T& max_by(Score&& score, const T& u, const T& v) {
  return leq(score(v), score(u)) ? u : v;
}

struct Selection {
  StrategyPtr strategy;
  std::uint64_t index;
  Outcome result;
};

// Out of the least reward-maximizing strategy of Op(M), by enumeration.
Selection select_bruteforce_effect(const TermPtr& effect, std::uint64_t cap = kDefaultStrategyCap);
Outcome select_bruteforce(const TermPtr& program, std::uint64_t cap = kDefaultStrategyCap);

// The local recursion on effect values.
Outcome select_fast(const TermPtr& effect);

}  // namespace selcalc
