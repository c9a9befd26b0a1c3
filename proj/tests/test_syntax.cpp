#include "selcalc/syntax.hpp"

#include <doctest.h>

using namespace selcalc;

namespace {

TermPtr T(const char* s) { return parse_term(s); }

TypePtr type_of(const char* s, Mode mode = Mode::Rewards) { return typecheck(Signature(), T(s), mode); }

}  // namespace

TEST_SUITE("syntax") {
  TEST_CASE("parsing builds the expected trees") {
    TermPtr t = T("(5 . tt) or (6 . ff)");
    REQUIRE(t->kind == TermKind::Op);
    CHECK(t->op == OpSym::Or);
    CHECK(t->kids[0]->op == OpSym::Reward);
    CHECK(t->kids[0]->params[0]->constant.value == 5);
    CHECK(t->kids[1]->kids[0]->constant == ff_const());
    CHECK(alpha_equal(t, mk_or(mk_reward(Rational(5), mk_tt()), mk_reward(Rational(6), mk_ff()))));

    TermPtr lam = T("fun (x: Bool) -> x");
    CHECK(alpha_equal(lam, mk_lam("x", bool_type(), mk_var("x"))));

    TermPtr pc = T("tt +[1/2] ff");
    CHECK(pc->op == OpSym::PChoice);
    CHECK(pc->prob == make_rational(1, 2));
  }

  TEST_CASE("printing") {
    CHECK(print_term(T("(5 . tt) or (6 . ff)")) == "5 . tt or 6 . ff");
    CHECK(print_term(T("fun (x: Bool) -> x")) == "fun (x: Bool) -> x");
    CHECK(print_term(T("(-1) . tt")) == "-1 . tt");
    CHECK(print_term(T("oplus[1/2](3, 4)")) == "oplus[1/2](3, 4)");
    CHECK(print_term(T("(fun (x: Bool) -> x or ff) tt")) == "let x: Bool = tt in x or ff");
    CHECK(print_type(parse_type("Bool * Rew -> Unit")) == "Bool * Rew -> Unit");
  }

  TEST_CASE("printing round-trips") {
    for (const char* s : {"(tt or ff) or tt", "tt or (ff or tt)", "1 . (tt +[1/3] ff) or ff", "fst <tt, 2 + 3>",
                          "let x: Bool * Rew = <tt, 1> in snd x . fst x", "if 1 <= 2 then tt else ff",
                          "(fun (f: Bool -> Bool) -> f tt) (fun (y: Bool) -> y or ff)"}) {
      TermPtr t = T(s);
      CHECK_MESSAGE(alpha_equal(t, T(print_term(t).c_str())), s);
    }
  }

  TEST_CASE("syntax errors carry positions") {
    CHECK_THROWS_AS(T("tt or"), SyntaxError);
    try {
      T("tt\n  or )");
      FAIL("no error");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("typing") {
    CHECK(print_type(type_of("(5 . tt) or (6 . ff)")) == "Bool");
    CHECK(print_type(type_of("fun (x: Rew) -> x . tt")) == "Rew -> Bool");
    CHECK(print_type(type_of("<tt, 2>")) == "Bool * Rew");
    CHECK(print_type(type_of("let x: Rew = 2 in x + x")) == "Rew");
    CHECK_THROWS_AS(type_of("(5 . tt) or (6 . *)"), TypeError);
    CHECK_THROWS_AS(type_of("tt . tt"), TypeError);
    CHECK_THROWS_AS(type_of("x"), TypeError);
  }

  TEST_CASE("probabilistic choice needs the probabilistic mode") {
    CHECK_THROWS_AS(type_of("tt +[1/2] ff"), TypeError);
    CHECK(print_type(type_of("tt +[1/2] ff", Mode::Prob)) == "Bool");
    CHECK(print_type(type_of("oplus[1/2](1, 2)", Mode::Prob)) == "Rew");
  }

  TEST_CASE("programs with declarations and a mode line") {
    Program p = parse_program("base Color = {red, green};\nmode prob;\n(1 . red) +[1/2] green\n");
    REQUIRE(p.mode);
    CHECK(*p.mode == Mode::Prob);
    CHECK(p.sig.is_finite("Color"));
    CHECK(p.sig.carrier("Color").size() == 2);
    CHECK(print_type(typecheck(p.sig, p.term, Mode::Prob)) == "Color");
  }

  TEST_CASE("substitution") {
    CHECK(alpha_equal(substitute(T("x or ff"), "x", mk_tt()), T("tt or ff")));
    TermPtr bound = T("fun (x: Bool) -> x");
    CHECK(alpha_equal(substitute(bound, "x", mk_tt()), bound));
    // y is free in the replacement, so the binder is renamed.
    TermPtr captured = substitute(T("fun (y: Bool) -> x"), "x", mk_var("y"));
    CHECK(captured->var != "y");
    CHECK(captured->kids[0]->var == "y");
  }

  TEST_CASE("constant substitution on effect values") {
    std::map<Const, TermPtr> swap = {{tt_const(), mk_ff()}, {ff_const(), mk_tt()}};
    CHECK(alpha_equal(subst_constants(T("0 . tt"), {{tt_const(), mk_ff()}}), T("0 . ff")));
    CHECK(alpha_equal(subst_constants(T("tt or ff"), swap), T("ff or tt")));
    TermPtr c = T("1 . tt");
    std::map<Const, TermPtr> both = {{tt_const(), c}, {ff_const(), c}};
    CHECK(alpha_equal(subst_constants(T("tt +[1/2] ff"), both), mk_pchoice(make_rational(1, 2), c, c)));
  }

  TEST_CASE("dispatchers") {
    std::map<Const, TermPtr> id = {{tt_const(), mk_tt()}, {ff_const(), mk_ff()}};
    CHECK(print_term(make_dispatcher({tt_const(), ff_const()}, id, bool_type())) ==
          "fun (x: Bool) -> if x == tt then tt else ff");
    CHECK(print_term(make_dispatcher({tt_const()}, {{tt_const(), mk_ff()}}, bool_type())) == "fun (x: Bool) -> ff");
  }

  TEST_CASE("alpha equivalence and values") {
    CHECK(alpha_equal(T("fun (x: Bool) -> x"), T("fun (y: Bool) -> y")));
    CHECK_FALSE(alpha_equal(T("fun (x: Bool) -> x"), T("fun (y: Bool) -> tt")));
    CHECK(is_value(T("<tt, fun (x: Bool) -> x or ff>")));
    CHECK_FALSE(is_value(T("tt or ff")));
    CHECK(is_effect_value(T("1 . (tt or ff +[1/2] tt)")));
    CHECK_FALSE(is_effect_value(T("fst <tt, ff>")));
    CHECK(print_value_key(T("<tt, 1/2>")) == "<tt,1/2>");
    CHECK(term_size(T("tt or ff")) == 3);
  }
}
