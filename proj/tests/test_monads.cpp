#include "selcalc/monads.hpp"

#include "selcalc/show.hpp"
#include "selcalc/syntax.hpp"

#include <doctest.h>

#include <string>

using namespace selcalc;

namespace {

using S = std::string;

const Rational half = make_rational(1, 2);

DWVal<S> dw(const std::vector<std::tuple<Rational, Reward, S>>& atoms) {
  std::vector<std::pair<Rewarded<S>, Rational>> items;
  for (const auto& [p, r, x] : atoms) items.emplace_back(Rewarded<S>{r, x}, p);
  return make_dist(items);
}

Dist<S> dist(const std::vector<std::pair<S, Rational>>& atoms) { return make_dist(atoms); }

// 1/2<1,tt> + 1/5<2,ff> + 3/10<3,tt>
DWVal<S> running_example() {
  return dw({{half, 1, "tt"}, {make_rational(1, 5), 2, "ff"}, {make_rational(3, 10), 3, "tt"}});
}

Reward gamma_tt2(const S& x) { return x == "tt" ? 2 : 0; }

}  // namespace

TEST_SUITE("monads") {
  TEST_CASE("distributions are canonical") {
    Dist<S> d = dist({{"b", make_rational(1, 4)}, {"a", make_rational(1, 4)}, {"b", half}});
    REQUIRE(d.size() == 2);
    CHECK(d.atoms[0].first == "a");
    CHECK(d.atoms[1].second == make_rational(3, 4));
    CHECK_THROWS_AS(dist({{"a", half}}), DomainError);
    CHECK(mix(make_rational(1, 3), dirac<S>("a"), dirac<S>("b")) == dist({{"a", make_rational(1, 3)}, {"b", make_rational(2, 3)}}));
  }

  TEST_CASE("units") {
    CHECK(DWMonad::unit<S>("tt") == dw({{1, 0, "tt"}}));
    CHECK(T3Monad::unit<S>("tt") == T3Val<S>{dirac<S>("tt"), 0});
    CHECK(WMonad::unit<S>("ff") == WVal<S>{0, "ff"});
    CHECK(T2Monad::unit<S>("tt").rew("tt") == 0);
    CHECK(MRMonad::unit<S>("tt") == MRVal<S>{{{"tt", 0}}});
  }

  TEST_CASE("binds") {
    CHECK(WMonad::bind(WVal<S>{2, "tt"}, [](const S& x) { return WVal<S>{3, x}; }) == WVal<S>{5, "tt"});
    auto f = [](const S& x) { return x == "a" ? dw({{1, 2, "a"}}) : dw({{1, 0, "b"}}); };
    CHECK(DWMonad::bind(dw({{half, 1, "a"}, {half, 0, "b"}}), f) == dw({{half, 3, "a"}, {half, 0, "b"}}));
    T3Val<S> t3 = T3Monad::bind(T3Val<S>{dist({{"a", half}, {"b", half}}), 1},
                                [](const S& x) { return T3Val<S>{dirac<S>(x + x), x == "a" ? 2 : 4}; });
    CHECK(t3 == T3Val<S>{dist({{"aa", half}, {"bb", half}}), 4});
  }

  TEST_CASE("reward actions") {
    CHECK(WMonad::reward(2, WVal<S>{3, "tt"}) == WVal<S>{5, "tt"});
    CHECK(T3Monad::reward(2, T3Val<S>{dirac<S>("tt"), 3}) == T3Val<S>{dirac<S>("tt"), 5});
    DWVal<S> u = running_example();
    CHECK(DWMonad::reward(0, u) == u);
    CHECK(MRMonad::reward(1, MRVal<S>{{{"tt", 5}}}) == MRVal<S>{{{"tt", 6}}});
  }

  TEST_CASE("probabilistic choice") {
    CHECK(DWMonad::pchoice(half, dw({{1, 1, "tt"}}), dw({{1, 3, "ff"}})) == dw({{half, 1, "tt"}, {half, 3, "ff"}}));
    T2Val<S> u{{{"tt", 1, 1}}};
    T2Val<S> v{{{"tt", 1, 3}}};
    T2Val<S> joined = T2Monad::pchoice(half, u, v);
    CHECK(joined == T2Val<S>{{{"tt", 1, 2}}});
    T2Val<S> w{{{"ff", 1, 5}}};
    CHECK(T2Monad::pchoice(1, u, w) == u);
    T2Val<S> split = T2Monad::pchoice(make_rational(1, 4), u, w);
    CHECK(split.rew("tt") == 1);
    CHECK(split.rew("ff") == 5);
  }

  TEST_CASE("algebras") {
    CHECK(WMonad::alpha(WVal<Reward>{2, 3}) == 5);
    std::vector<std::pair<Rewarded<Reward>, Rational>> items = {{{1, 1}, half}, {{0, 3}, half}};
    CHECK(DWMonad::alpha(make_dist(items)) == make_rational(5, 2));
    CHECK(T3Monad::alpha(T3Val<Reward>{make_dist<Reward>({{1, half}, {3, half}}), 2}) == 4);
  }

  TEST_CASE("expected rewards") {
    CHECK(DWMonad::expect(running_example(), [](const S&) { return Reward(0); }) == make_rational(9, 5));
    CHECK(WMonad::expect(WVal<S>{5, "tt"}, gamma_tt2) == 7);
    CHECK(T2Monad::expect(T2Monad::unit<S>("tt"), gamma_tt2) == 2);
    CHECK(T3Monad::expect(T3Monad::unit<S>("ff"), gamma_tt2) == 0);
    CHECK(expect0(running_example()) == make_rational(9, 5));
  }

  TEST_CASE("observations of a distribution over rewarded values") {
    DWVal<S> u = running_example();
    CHECK(vdis(u) == dist({{"tt", make_rational(4, 5)}, {"ff", make_rational(1, 5)}}));
    CHECK(cond_reward(u, S("ff")) == 2);
    CHECK(cond_reward(u, S("tt")) == make_rational(7, 4));
    CHECK_THROWS_AS(cond_reward(u, S("zz")), DomainError);

    T2Val<S> t2 = theta<T2Monad>(u);
    CHECK(t2.dist() == vdis(u));
    CHECK(t2.rew("tt") == make_rational(7, 4));
    CHECK(t2.rew("ff") == 2);
    CHECK(theta<T3Monad>(dw({{half, 1, "tt"}, {half, 3, "ff"}})) ==
          T3Val<S>{dist({{"tt", half}, {"ff", half}}), 2});
    CHECK(theta<T3Monad>(DWMonad::unit<S>("tt")) == T3Monad::unit<S>("tt"));
    CHECK(theta<T2Monad>(DWMonad::unit<S>("tt")) == T2Monad::unit<S>("tt"));
  }

  TEST_CASE("reward addition") {
    auto gamma = [](const S& x) { return Reward(x == "tt" ? 1 : 2); };
    DWVal<S> u = dw({{half, 1, "tt"}, {half, 3, "ff"}});
    CHECK(k_gamma<DWMonad, S>(gamma, u) == dw({{half, 2, "tt"}, {half, 5, "ff"}}));
    CHECK(k_gamma<DWMonad, S>([](const S&) { return Reward(0); }, u) == u);
  }

  TEST_CASE("max-plus reward maps") {
    auto mr = [](const char* s) { return show(mr_of_effect(parse_term(s))); };
    CHECK(mr("(5 . tt) or (6 . ff)") == "{tt -> 5, ff -> 6}");
    CHECK(mr("(5 . tt) or (4 . tt)") == "{tt -> 5}");
    CHECK(mr("tt") == "{tt -> 0}");
    CHECK(MRMonad::choice(MRVal<S>{{{"a", 1}}}, MRVal<S>{{{"a", 3}, {"b", 0}}}) == MRVal<S>{{{"a", 3}, {"b", 0}}});
  }

  TEST_CASE("the multiplicative structure has no sound reward-averaging monad") {
    StructureScope scope(Structure::MulPositiveRationals);
    CHECK_THROWS_AS(T3Monad::require_supported(), DomainError);
    CHECK(WMonad::unit<S>("tt").reward == 1);
  }
}
