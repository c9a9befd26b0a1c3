#include "selcalc/selection.hpp"

#include "selcalc/show.hpp"

#include <doctest.h>

using namespace selcalc;

namespace {

TermPtr T(const char* s) { return parse_term(s); }

template <class M>
std::string at(const char* program, const Gamma<M>& gamma = zero_gamma<M>()) {
  return show(denote_program<M>(T(program))(gamma));
}

template <class M>
Reward expect_at(const char* program, const Gamma<M>& gamma) {
  return sel_expect<M>(denote_program<M>(T(program)), gamma);
}

template <class M>
Gamma<M> table(const char* json) {
  return gamma_of<M>(parse_reward_table(json));
}

}  // namespace

TEST_SUITE("selection") {
  TEST_CASE("unit and expectation") {
    auto x = SemVal<WMonad>::base(tt_const());
    CHECK(show(sel_unit<WMonad>(x)(zero_gamma<WMonad>())) == "<0, tt>");
    CHECK(sel_expect<WMonad>(sel_unit<WMonad>(x), table<WMonad>(R"({"tt":"3"})")) == 3);
    CHECK(at<WMonad>("<tt, ff>") == "<0, <tt,ff>>");
  }

  TEST_CASE("binary choice maximizes the expected reward") {
    CHECK(at<WMonad>("(5 . tt) or (6 . ff)") == "<6, ff>");
    CHECK(at<WMonad>("(5 . tt) or (5 . ff)") == "<5, tt>");
    CHECK(expect_at<WMonad>("(5 . tt) or (6 . ff)", zero_gamma<WMonad>()) == 6);
    // The continuation can reverse the choice.
    CHECK(at<WMonad>("(5 . tt) or (6 . ff)", table<WMonad>(R"({"tt":"2"})")) == "<5, tt>");
  }

  TEST_CASE("reward and probabilistic choice") {
    CHECK(at<WMonad>("2 . (3 . tt)") == "<5, tt>");
    CHECK(at<DWMonad>("tt +[1/2] ff") == "1/2 <0, tt> + 1/2 <0, ff>");
    CHECK(expect_at<DWMonad>("tt +[1/2] ff", table<DWMonad>(R"({"tt":"2","ff":"0"})")) == 1);
    CHECK_THROWS_AS(denote_program<WMonad>(T("tt +[1/2] ff")), EvalError);
  }

  TEST_CASE("programs") {
    CHECK(at<WMonad>("if tt then 1 . tt else ff") == "<1, tt>");
    CHECK(at<WMonad>("(fun (x: Bool) -> x or ff) tt") == "<0, tt>");
    // The continuation passed to the bound term sees the reward of the body, so tt scores 5 + 1 = 6 and wins the tie.
    CHECK(at<WMonad>("let x: Bool = (5 . tt) or (6 . ff) in if x then 1 . x else x") == "<6, tt>");
    CHECK(at<WMonad>("let x: Bool = (5 . tt) or (6 . ff) in if x then 1 . x else x") ==
          show(observe<WMonad>(T("let x: Bool = (5 . tt) or (6 . ff) in if x then 1 . x else x"))));
    CHECK(at<WMonad>("let f: Bool -> Bool = fun (y: Bool) -> 2 . y in f ff") == "<2, ff>");
    CHECK(at<WMonad>("fst <3 . tt, 4 . ff>") == "<7, tt>");
  }

  TEST_CASE("pure semantics") {
    CHECK(show(denote_pure<WMonad>(T("tt"))) == "tt");
    CHECK(carrier_element(tt_const()) == 1);
    CHECK(show(denote_pure<WMonad>(T("<tt, ff>"))) == "<tt,ff>");
    SemVal<WMonad> id = denote_pure<WMonad>(T("fun (x: Bool) -> x"));
    CHECK(show(id.apply(SemVal<WMonad>::base(ff_const()))(zero_gamma<WMonad>())) == "<0, ff>");
    CHECK_THROWS_AS(denote_pure<WMonad>(T("tt or ff")), EvalError);
  }

  TEST_CASE("denotations agree with the selected outcome") {
    const char* e2 = "(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))";
    CHECK(at<DWMonad>(e2) == show(select_fast(T(e2))));
    CHECK(at<DWMonad>(e2) == "1/2 <1, tt> + 1/5 <2, ff> + 3/10 <3, tt>");
    CHECK(at<T3Monad>(e2) == "<4/5 tt + 1/5 ff, 9/5>");
    CHECK(at<T2Monad>(e2) == "<4/5 tt + 1/5 ff, {tt -> 7/4, ff -> 2}>");
    CHECK(at<DWMonad>("(5 . tt) or ((5 . tt) +[1/2] (6 . ff))") == "1/2 <5, tt> + 1/2 <6, ff>");
  }

  TEST_CASE("observations") {
    const char* e2 = "(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))";
    CHECK(show(observe<T3Monad>(T(e2))) == "<4/5 tt + 1/5 ff, 9/5>");
    CHECK(show(observe<T2Monad>(T(e2))) == "<4/5 tt + 1/5 ff, {tt -> 7/4, ff -> 2}>");
    CHECK(show(observe<WMonad>(T("(5 . tt) or (6 . ff)"))) == "<6, ff>");
  }

  TEST_CASE("reward-addition programs") {
    RewardTable gamma = parse_reward_table(R"({"tt":"1","ff":"2"})");
    TermPtr kappa = kappa_program({tt_const(), ff_const()}, gamma, bool_type());
    CHECK(print_term(kappa) == "fun (x: Bool) -> if x == tt then 1 . tt else 2 . ff");
    CHECK_THROWS_AS(kappa_program({}, gamma, bool_type()), Error);

    // k_gamma of the denotation at gamma equals the denotation of the kappa application at zero.
    TermPtr e = T("(1 . tt) or (0 . ff +[1/2] 3 . tt)");
    auto lhs = k_gamma<DWMonad, SemVal<DWMonad>>(gamma_of<DWMonad>(gamma), denote_program<DWMonad>(e)(gamma_of<DWMonad>(gamma)));
    auto rhs = denote_program<DWMonad>(mk_app(kappa, e))(zero_gamma<DWMonad>());
    CHECK(show(lhs) == show(rhs));
  }

  TEST_CASE("reward tables") {
    RewardTable t = parse_reward_table(R"({"tt":"1/2","ff":"-2"})");
    CHECK(t("tt") == make_rational(1, 2));
    CHECK(t("other") == 0);
    CHECK(reward_table_json(t) == R"({"ff":"-2","tt":"1/2"})");
    CHECK(zero_table().is_zero());
    CHECK(zero_table().describe() == "the zero table");
    CHECK_THROWS_AS(parse_reward_table("[1]"), Error);
    CHECK_THROWS_AS(parse_reward_table(R"({"tt":"x"})"), Error);
  }
}
