#include "selcalc/testgen.hpp"

#include "selcalc/operational.hpp"

#include <doctest.h>

#include <functional>
#include <set>

using namespace selcalc;

namespace {

bool contains(const TermPtr& t, const std::function<bool(const TermPtr&)>& pred) {
  if (pred(t)) return true;
  for (std::size_t i = 0; i < t->arity(); ++i)
    if (contains(t->child(i), pred)) return true;
  return false;
}

bool has_op(const TermPtr& t, OpSym op) {
  return contains(t, [op](const TermPtr& s) { return s->kind == TermKind::Op && s->op == op; });
}

bool has_effect(const TermPtr& t) {
  return contains(t, [](const TermPtr& s) { return s->kind == TermKind::Op; });
}

}  // namespace

TEST_SUITE("testgen") {
  TEST_CASE("configuration") {
    GenConfig cfg = default_gen_config(Mode::Prob, 5);
    CHECK(cfg.seed == 5);
    CHECK(cfg.reward_pool.size() == 11);
    CHECK(cfg.prob_pool.size() == 6);
    validate(cfg);
    GenConfig bad = cfg;
    bad.reward_pool.clear();
    CHECK_THROWS_AS(validate(bad), Error);
    bad = cfg;
    bad.prob_pool = {1};
    CHECK_THROWS_AS(validate(bad), Error);
    bad = cfg;
    bad.max_term_size = 0;
    CHECK_THROWS_AS(validate(bad), Error);
  }

  TEST_CASE("tiny programs") {
    GenConfig cfg = default_gen_config(Mode::Rewards, 1);
    cfg.max_term_size = 1;
    TermPtr t = gen_program(cfg, bool_type());
    CHECK(t->kind == TermKind::Const);
    CHECK(type_equal(typecheck(Signature(), t, Mode::Rewards), bool_type()));
  }

  TEST_CASE("generated programs are well typed and terminate") {
    for (Mode mode : {Mode::Rewards, Mode::Prob}) {
      Generator g(default_gen_config(mode, 11));
      std::size_t with_effects = 0;
      for (int i = 0; i < 500; ++i) {
        TypePtr target = i % 5 == 0 ? g.type() : bool_type();
        TermPtr p = g.program(target);
        CHECK(term_size(p) <= 40);
        CHECK(is_closed(p));
        CHECK(type_equal(typecheck(Signature(), p, mode), target));
        CHECK(type_rank(target) <= 2);
        CHECK_NOTHROW(eval_effect(p));
        if (mode == Mode::Rewards) CHECK_FALSE(has_op(p, OpSym::PChoice));
        if (i % 5 != 0 && has_effect(p)) ++with_effects;
      }
      CHECK(with_effects * 10 >= 400 * 6);
      for (const char* ctor : {"or", "reward", "app", "if", "let", "intro", "proj", "fn", "var", "value"}) {
        CAPTURE(std::string(ctor));
        CHECK(g.coverage().count(ctor) == 1);
      }
      if (mode == Mode::Prob) CHECK(g.coverage().count("pchoice") == 1);
    }
  }

  TEST_CASE("seeded replay") {
    GenConfig cfg = default_gen_config(Mode::Prob, 99);
    CHECK(print_term(gen_program(cfg, bool_type())) == print_term(gen_program(cfg, bool_type())));
    GenConfig other = cfg;
    other.seed = 100;
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 20; ++s) {
      other.seed = s;
      seen.insert(print_term(gen_program(other, bool_type())));
    }
    CHECK(seen.size() > 10);
  }

  TEST_CASE("reward tables") {
    GenConfig cfg = default_gen_config(Mode::Rewards, 7);
    auto a = gen_gamma(cfg, bool_type(), 4);
    auto b = gen_gamma(cfg, bool_type(), 4);
    REQUIRE(a.size() == 4);
    CHECK(a[0].is_zero());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(reward_table_json(a[i]) == reward_table_json(b[i]));
    std::set<std::string> pool;
    for (const auto& r : cfg.reward_pool) pool.insert(to_string(r));
    for (const auto& t : a)
      for (const auto& [k, r] : t.entries) CHECK(pool.count(to_string(r)) == 1);
    CHECK(carrier_keys(prod_type(bool_type(), unit_type())) == std::vector<std::string>{"<tt,*>", "<ff,*>"});
    CHECK_THROWS_AS(gen_gamma(cfg, arrow_type(bool_type(), bool_type()), 2), Error);
  }

  TEST_CASE("monad values") {
    Generator g(default_gen_config(Mode::Prob, 3));
    std::vector<std::string> carrier = {"a", "b"};
    for (int i = 0; i < 100; ++i) {
      auto dw = gen_monad_value<DWMonad>(g, carrier);
      Rational mass = 0;
      for (const auto& [x, p] : dw.atoms) {
        CHECK(p > 0);
        mass += p;
      }
      CHECK(mass == 1);
      auto t2 = gen_monad_value<T2Monad>(g, carrier);
      Rational t2_mass = 0;
      for (const auto& a : t2.atoms) t2_mass += a.prob;
      CHECK(t2_mass == 1);
      CHECK(t2.dist().size() == t2.atoms.size());
    }
    Generator g1(default_gen_config(Mode::Prob, 3)), g2(default_gen_config(Mode::Prob, 3));
    CHECK(gen_monad_value<T3Monad>(g1, carrier) == gen_monad_value<T3Monad>(g2, carrier));
  }

  TEST_CASE("effect values and contexts") {
    Generator g(default_gen_config(Mode::Prob, 21));
    for (int i = 0; i < 50; ++i) {
      TermPtr e = g.effect_value(6);
      CHECK(is_effect_value(e));
      TermPtr tied = g.tied_effect_value(4);
      REQUIRE(tied->op == OpSym::Or);
      CHECK(alpha_equal(tied->kids[1], swap_booleans(tied->kids[0])));
      Context c = g.context(bool_type(), bool_type(), 10);
      TermPtr plugged = c.plug(mk_tt());
      CHECK(type_equal(typecheck(Signature(), plugged, Mode::Prob), bool_type()));
    }
  }

  TEST_CASE("axiom instances match their axiom") {
    Generator g(default_gen_config(Mode::Prob, 4));
    for (const auto& a : axiom_catalog()) {
      CAPTURE(a.name);
      TermPtr lhs = instantiate_axiom(a.name, g);
      CHECK_NOTHROW(apply_axiom(a.name, lhs));
    }
  }
}
