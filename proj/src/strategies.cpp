#include "selcalc/strategies.hpp"

#include "selcalc/operational.hpp"

#include <limits>

namespace selcalc {

StrategyPtr strategy_leaf() {
  static const StrategyPtr s = std::make_shared<const Strategy>(Strategy{StrategyKind::Leaf, nullptr, nullptr});
  return s;
}

StrategyPtr strategy_left(StrategyPtr s) {
  return std::make_shared<const Strategy>(Strategy{StrategyKind::Left, std::move(s), nullptr});
}

StrategyPtr strategy_right(StrategyPtr s) {
  return std::make_shared<const Strategy>(Strategy{StrategyKind::Right, std::move(s), nullptr});
}

StrategyPtr strategy_through(StrategyPtr s) {
  return std::make_shared<const Strategy>(Strategy{StrategyKind::Through, std::move(s), nullptr});
}

StrategyPtr strategy_pair(StrategyPtr a, StrategyPtr b) {
  return std::make_shared<const Strategy>(Strategy{StrategyKind::Pair, std::move(a), std::move(b)});
}

std::string print_strategy(const StrategyPtr& s) {
  switch (s->kind) {
    case StrategyKind::Leaf: return "*";
    case StrategyKind::Left: return "1" + print_strategy(s->first);
    case StrategyKind::Right: return "2" + print_strategy(s->first);
    case StrategyKind::Through: return print_strategy(s->first);
    case StrategyKind::Pair: return "(" + print_strategy(s->first) + "," + print_strategy(s->second) + ")";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

void require_effect(const TermPtr& e) {
  if (!is_effect_value(e)) throw DomainError("expected an effect value, got " + print_term(e));
}

// Returns false once the visitor asked to stop.
bool walk(const TermPtr& e, const std::function<bool(const StrategyPtr&)>& visit) {
  if (is_value(e)) return visit(strategy_leaf());
  switch (e->op) {
    case OpSym::Or:
      if (!walk(e->kids[0], [&](const StrategyPtr& s) { return visit(strategy_left(s)); })) return false;
      return walk(e->kids[1], [&](const StrategyPtr& s) { return visit(strategy_right(s)); });
    case OpSym::Reward: return walk(e->kids[0], [&](const StrategyPtr& s) { return visit(strategy_through(s)); });
    case OpSym::PChoice:
      return walk(e->kids[0], [&](const StrategyPtr& a) {
        return walk(e->kids[1], [&](const StrategyPtr& b) { return visit(strategy_pair(a, b)); });
      });
  }
  return true;
}

}  // namespace

std::uint64_t count_strategies(const TermPtr& e) {
  if (is_value(e)) return 1;
  switch (e->op) {
    case OpSym::Or: return sat_add(count_strategies(e->kids[0]), count_strategies(e->kids[1]));
    case OpSym::Reward: return count_strategies(e->kids[0]);
    case OpSym::PChoice: return sat_mul(count_strategies(e->kids[0]), count_strategies(e->kids[1]));
  }
  return 1;
}

void for_each_strategy(const TermPtr& effect, const std::function<bool(const StrategyPtr&)>& visit) {
  require_effect(effect);
  walk(effect, visit);
}

std::vector<StrategyPtr> enumerate_strategies(const TermPtr& effect, std::uint64_t cap) {
  require_effect(effect);
  std::uint64_t n = count_strategies(effect);
  if (n > cap) throw CapExceeded("effect value has " + std::to_string(n) + " strategies, cap is " + std::to_string(cap));
  std::vector<StrategyPtr> out;
  out.reserve(n);
  walk(effect, [&](const StrategyPtr& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

Outcome outcome(const StrategyPtr& s, const TermPtr& e) {
  auto mismatch = [&]() { return DomainError("strategy " + print_strategy(s) + " does not fit " + print_term(e)); };
  if (is_value(e)) {
    if (s->kind != StrategyKind::Leaf) throw mismatch();
    return DWMonad::unit(ValueKey{e});
  }
  if (e->kind != TermKind::Op) throw mismatch();
  switch (e->op) {
    case OpSym::Or:
      if (s->kind == StrategyKind::Left) return outcome(s->first, e->kids[0]);
      if (s->kind == StrategyKind::Right) return outcome(s->first, e->kids[1]);
      throw mismatch();
    case OpSym::Reward:
      if (s->kind != StrategyKind::Through) throw mismatch();
      return DWMonad::reward(e->params[0]->constant.value, outcome(s->first, e->kids[0]));
    case OpSym::PChoice:
      if (s->kind != StrategyKind::Pair) throw mismatch();
      return DWMonad::pchoice(e->prob, outcome(s->first, e->kids[0]), outcome(s->second, e->kids[1]));
  }
  throw mismatch();
}

Reward outcome_reward(const Outcome& o) { return expect0(o); }

Reward strategy_reward(const StrategyPtr& s, const TermPtr& e) { return outcome_reward(outcome(s, e)); }

Selection select_bruteforce_effect(const TermPtr& effect, std::uint64_t cap) {
  require_effect(effect);
  std::uint64_t n = count_strategies(effect);
  if (n > cap) throw CapExceeded("effect value has " + std::to_string(n) + " strategies, cap is " + std::to_string(cap));
  Selection best;
  std::optional<Reward> best_score;
  std::uint64_t index = 0;
  walk(effect, [&](const StrategyPtr& s) {
    Outcome o = outcome(s, effect);
    Reward r = outcome_reward(o);
    if (!best_score || less(*best_score, r)) {
      best_score = r;
      best = Selection{s, index, std::move(o)};
    }
    ++index;
    return true;
  });
  return best;
}

Outcome select_bruteforce(const TermPtr& program, std::uint64_t cap) {
  return select_bruteforce_effect(eval_effect(program), cap).result;
}

Outcome select_fast(const TermPtr& e) {
  require_effect(e);
  if (is_value(e)) return DWMonad::unit(ValueKey{e});
  switch (e->op) {
    case OpSym::Or: {
      Outcome a = select_fast(e->kids[0]);
      Outcome b = select_fast(e->kids[1]);
      return leq(outcome_reward(b), outcome_reward(a)) ? a : b;
    }
    case OpSym::Reward: return DWMonad::reward(e->params[0]->constant.value, select_fast(e->kids[0]));
    case OpSym::PChoice: return DWMonad::pchoice(e->prob, select_fast(e->kids[0]), select_fast(e->kids[1]));
  }
  throw DomainError("unknown operation in effect value");
}

}  // namespace selcalc
