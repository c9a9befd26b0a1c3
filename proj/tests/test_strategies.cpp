#include "selcalc/strategies.hpp"

#include "selcalc/operational.hpp"

#include <doctest.h>

using namespace selcalc;

namespace {

TermPtr T(const char* s) { return parse_term(s); }

Outcome dirac_outcome(const Rational& r, const TermPtr& v) { return dirac(Rewarded<ValueKey>{r, ValueKey{v}}); }

Outcome mixed(const std::vector<std::tuple<Rational, Rational, TermPtr>>& atoms) {
  std::vector<std::pair<Rewarded<ValueKey>, Rational>> items;
  for (const auto& [p, r, v] : atoms) items.emplace_back(Rewarded<ValueKey>{r, ValueKey{v}}, p);
  return make_dist(items);
}

std::vector<std::string> printed(const TermPtr& e) {
  std::vector<std::string> out;
  for (const auto& s : enumerate_strategies(e)) out.push_back(print_strategy(s));
  return out;
}

const Rational half = make_rational(1, 2);

}  // namespace

TEST_SUITE("strategies") {
  TEST_CASE("enumeration order") {
    CHECK(printed(T("tt")) == std::vector<std::string>{"*"});
    CHECK(printed(T("(5 . tt) or (6 . ff)")) == std::vector<std::string>{"1*", "2*"});
    CHECK(printed(T("(tt or ff) +[1/2] tt")) == std::vector<std::string>{"(1*,*)", "(2*,*)"});
    CHECK(printed(T("(tt or ff) or (tt or ff)")) == std::vector<std::string>{"11*", "12*", "21*", "22*"});
    CHECK(count_strategies(T("(tt or ff) +[1/2] (tt or ff or tt)")) == 6);
    CHECK_THROWS_AS(enumerate_strategies(T("(tt or ff) or (tt or ff)"), 3), CapExceeded);
  }

  TEST_CASE("outcomes and rewards") {
    CHECK(outcome(strategy_leaf(), T("tt")) == dirac_outcome(0, mk_tt()));
    TermPtr e = T("(5 . tt) or (6 . ff)");
    StrategyPtr through = strategy_through(strategy_leaf());
    CHECK(outcome(strategy_right(through), e) == dirac_outcome(6, mk_ff()));
    CHECK(strategy_reward(strategy_left(through), e) == 5);
    CHECK(strategy_reward(through, T("5 . tt")) == 5);

    TermPtr p = T("(1 . tt) +[1/2] (3 . ff)");
    StrategyPtr pair = strategy_pair(through, through);
    CHECK(outcome(pair, p) == mixed({{half, 1, mk_tt()}, {half, 3, mk_ff()}}));
    CHECK(strategy_reward(pair, p) == 2);
    CHECK_THROWS_AS(outcome(strategy_leaf(), e), Error);
    CHECK_THROWS_AS(outcome(strategy_leaf(), T("5 . tt")), Error);
  }

  TEST_CASE("argmax and max_by") {
    std::vector<int> scores = {2, 5, 5};
    CHECK(argmax_index(scores, [](int x) { return Reward(x); }) == 1);
    CHECK(argmax_index(std::vector<int>{7}, [](int x) { return Reward(x); }) == 0);
    CHECK_THROWS_AS(argmax_index(std::vector<int>{}, [](int x) { return Reward(x); }), DomainError);

    std::string u = "u", v = "v";
    CHECK(&max_by([](const std::string&) { return Reward(1); }, u, v) == &u);
    CHECK(&max_by([](const std::string& s) { return Reward(s == "u" ? 1 : 2); }, u, v) == &v);
  }

  TEST_CASE("selection by enumeration") {
    CHECK(select_bruteforce(T("(5 . tt) or (6 . ff)")) == dirac_outcome(6, mk_ff()));
    CHECK(select_bruteforce(T("(5 . tt) or ((5 . tt) +[1/2] (6 . ff))")) ==
          mixed({{half, 5, mk_tt()}, {half, 6, mk_ff()}}));
    Selection tie = select_bruteforce_effect(T("(5 . tt) or (5 . ff)"));
    CHECK(tie.index == 0);
    CHECK(print_strategy(tie.strategy) == "1*");
    CHECK(tie.result == dirac_outcome(5, mk_tt()));
  }

  TEST_CASE("local selection") {
    CHECK(select_fast(T("tt")) == dirac_outcome(0, mk_tt()));
    CHECK(select_fast(T("2 . ((5 . tt) or (6 . ff))")) == dirac_outcome(8, mk_ff()));
    CHECK(select_fast(T("(5 . tt) or (5 . ff)")) == dirac_outcome(5, mk_tt()));
    CHECK(select_fast(T("(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))")) ==
          mixed({{half, 1, mk_tt()}, {make_rational(1, 5), 2, mk_ff()}, {make_rational(3, 10), 3, mk_tt()}}));
    CHECK(outcome_reward(select_fast(T("(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))"))) == make_rational(9, 5));
  }

  TEST_CASE("local selection agrees with enumeration") {
    for (const char* s : {"(1 . tt or 2 . ff) +[1/3] (3 . tt or (0 . ff +[1/2] 6 . tt))",
                          "((-1) . (tt or ff)) or (tt +[1/4] 2 . ff)", "(tt or ff) or (ff or tt)",
                          "1 . ((2 . tt +[1/2] ff) or (1 . ff +[1/2] 1 . tt))"}) {
      TermPtr e = T(s);
      CHECK_MESSAGE(select_fast(e) == select_bruteforce_effect(e).result, s);
    }
  }
}
