#include "selcalc/testgen.hpp"

#include "selcalc/equations.hpp"

#include <algorithm>
#include <functional>

namespace selcalc {

GenConfig default_gen_config(Mode mode, std::uint64_t seed) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.mode = mode;
  switch (active_structure()) {
    case Structure::AddRationals:
      for (long n = -3; n <= 3; ++n) cfg.reward_pool.push_back(make_rational(n));
      for (long d : {2, 3}) {
        cfg.reward_pool.push_back(make_rational(1, d));
        cfg.reward_pool.push_back(make_rational(-1, d));
      }
      break;
    case Structure::NonNegAdd:
      for (long n = 0; n <= 3; ++n) cfg.reward_pool.push_back(make_rational(n));
      cfg.reward_pool.push_back(make_rational(1, 2));
      cfg.reward_pool.push_back(make_rational(1, 3));
      break;
    case Structure::MulPositiveRationals:
      for (long n = 1; n <= 3; ++n) cfg.reward_pool.push_back(make_rational(n));
      cfg.reward_pool.push_back(make_rational(1, 2));
      cfg.reward_pool.push_back(make_rational(1, 3));
      break;
  }
  cfg.prob_pool = {make_rational(1, 2), make_rational(1, 3), make_rational(2, 3),
                   make_rational(1, 4), make_rational(3, 4), make_rational(2, 5)};
  return cfg;
}

void validate(const GenConfig& cfg) {
  if (cfg.reward_pool.empty()) throw DomainError("generator reward pool is empty");
  if (cfg.prob_pool.empty()) throw DomainError("generator probability pool is empty");
  if (cfg.max_term_size < 1) throw DomainError("generator term size bound must be at least 1");
  for (const auto& p : cfg.prob_pool)
    if (p <= 0 || p >= 1) throw DomainError("generator probabilities must lie in (0,1), got " + to_string(p));
  for (const auto& r : cfg.reward_pool)
    if (!in_carrier(r)) throw DomainError("reward " + to_string(r) + " is outside the active reward structure");
}

std::vector<std::string> carrier_keys(const TypePtr& t, const Signature& sig) {
  switch (t->kind) {
    case TypeKind::Base: {
      if (!sig.is_finite(t->name)) throw DomainError("infinite carrier for type " + t->name);
      std::vector<std::string> out;
      for (const auto& c : sig.carrier(t->name)) out.push_back(print_const(c));
      return out;
    }
    case TypeKind::Unit: return {"*"};
    case TypeKind::Prod: {
      std::vector<std::string> out;
      for (const auto& a : carrier_keys(t->left, sig))
        for (const auto& b : carrier_keys(t->right, sig)) out.push_back("<" + a + "," + b + ">");
      return out;
    }
    case TypeKind::Arrow: break;
  }
  throw DomainError("no finite carrier at function type " + print_type(t));
}

namespace {

bool has_arrow(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Arrow: return true;
    case TypeKind::Prod: return has_arrow(t->left) || has_arrow(t->right);
    default: return false;
  }
}

}  // namespace

Generator::Generator(GenConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) { validate(cfg_); }

std::size_t Generator::below(std::size_t n) {
  if (n == 0) throw DomainError("empty choice");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Reward Generator::reward() { return cfg_.reward_pool[below(cfg_.reward_pool.size())]; }

Rational Generator::prob() { return cfg_.prob_pool[below(cfg_.prob_pool.size())]; }

std::vector<Rational> Generator::partition(std::size_t n) {
  std::vector<long> w(n);
  long total = 0;
  for (auto& x : w) total += (x = 1 + static_cast<long>(below(4)));
  std::vector<Rational> out;
  for (long x : w) out.push_back(make_rational(x, total));
  return out;
}

std::string Generator::fresh() { return "v" + std::to_string(names_++); }

TypePtr Generator::small_type() {
  switch (below(10)) {
    case 0: return unit_type();
    case 1:
    case 2: return prod_type(bool_type(), coin() ? bool_type() : rew_type());
    case 3:
    case 4:
    case 5: return rew_type();
    default: return bool_type();
  }
}

TypePtr Generator::type(int depth) {
  if (depth <= 0 || cfg_.max_order == 0) return small_type();
  std::size_t k = below(10);
  if (k < 6) return small_type();
  if (k < 8) return prod_type(type(depth - 1), small_type());
  TypePtr arg = type(depth - 1);
  while (type_rank(arg) + 1 > cfg_.max_order) arg = small_type();
  return arrow_type(arg, type(depth - 1));
}

TermPtr Generator::closed_value(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
      if (t->name == "Bool") return coin() ? mk_tt() : mk_ff();
      if (t->name == "Rew") return mk_rew(reward());
      throw DomainError("generator has no constants for base type " + t->name);
    case TypeKind::Unit: return mk_star();
    case TypeKind::Prod: return mk_pair(closed_value(t->left), closed_value(t->right));
    case TypeKind::Arrow: {
      std::string x = fresh();
      TermPtr body = type_equal(t->left, t->right) && coin() ? mk_var(x) : closed_value(t->right);
      return mk_lam(x, t->left, body);
    }
  }
  throw DomainError("unknown type");
}

TermPtr Generator::leaf(const TypePtr& t, const Env& env) {
  std::vector<const Binding*> matches;
  for (const auto& b : env)
    if (type_equal(b.type, t)) matches.push_back(&b);
  if (!matches.empty() && coin(0.6)) {
    count("var");
    return mk_var(matches[below(matches.size())]->name);
  }
  count("value");
  return closed_value(t);
}

TermPtr Generator::amount(const Env& env) {
  if (coin(0.85)) return mk_rew(reward());
  return gen(rew_type(), env, 3);
}

TermPtr Generator::gen(const TypePtr& t, const Env& env, std::size_t budget) {
  if (budget <= 1) return leaf(t, env);
  const bool probabilistic = cfg_.mode == Mode::Prob;
  const std::size_t rest = budget - 1;
  auto split = [&](std::size_t n) {
    std::size_t a = 1 + below(std::max<std::size_t>(n, 2) - 1);
    return std::make_pair(a, n > a ? n - a : 1);
  };

  enum Choice { Or, Reward, PChoice, If, Let, App, Proj, Fn, Intro, Leaf };
  std::vector<std::pair<Choice, int>> weights = {{Or, 5}, {Reward, 5}, {If, 2}, {Let, 2}, {App, 2}, {Proj, 1}, {Leaf, 1}};
  if (probabilistic) weights.emplace_back(PChoice, 5);
  if (t->kind == TypeKind::Base) weights.emplace_back(Fn, 2);
  if (t->kind == TypeKind::Prod || t->kind == TypeKind::Arrow) weights.emplace_back(Intro, 5);
  int total = 0;
  for (const auto& [c, w] : weights) total += w;
  int pick = static_cast<int>(below(static_cast<std::size_t>(total)));
  Choice choice = Leaf;
  for (const auto& [c, w] : weights) {
    if (pick < w) {
      choice = c;
      break;
    }
    pick -= w;
  }

  switch (choice) {
    case Or: {
      count("or");
      auto [a, b] = split(rest);
      return mk_or(gen(t, env, a), gen(t, env, b));
    }
    case Reward: {
      count("reward");
      return mk_reward(amount(env), gen(t, env, rest));
    }
    case PChoice: {
      count("pchoice");
      auto [a, b] = split(rest);
      return mk_pchoice(prob(), gen(t, env, a), gen(t, env, b));
    }
    case If: {
      count("if");
      std::size_t c = 1 + below(std::min<std::size_t>(rest, 4));
      auto [a, b] = split(rest > c ? rest - c : 2);
      return mk_if(gen(bool_type(), env, c), gen(t, env, a), gen(t, env, b));
    }
    case Let: {
      count("let");
      TypePtr s = type(1);
      auto [a, b] = split(rest);
      std::string x = fresh();
      TermPtr bound = gen(s, env, a);
      Env inner = env;
      inner.push_back({x, s});
      return mk_let(x, s, bound, gen(t, inner, b));
    }
    case App: {
      TypePtr s = small_type();
      TypePtr f = arrow_type(s, t);
      if (type_rank(f) > cfg_.max_order) return leaf(t, env);
      count("app");
      auto [a, b] = split(rest);
      return mk_app(gen(f, env, a), gen(s, env, b));
    }
    case Proj: {
      count("proj");
      TypePtr other = small_type();
      if (coin()) return mk_fst(gen(prod_type(t, other), env, rest));
      return mk_snd(gen(prod_type(other, t), env, rest));
    }
    case Fn: {
      count("fn");
      auto [a, b] = split(rest);
      if (t->name == "Bool") {
        if (coin()) return mk_leq(gen(rew_type(), env, a), gen(rew_type(), env, b));
        TypePtr s = coin() ? bool_type() : rew_type();
        return mk_eq(gen(s, env, a), gen(s, env, b));
      }
      if (t->name == "Rew") {
        if (probabilistic && coin()) return mk_oplus(prob(), gen(t, env, a), gen(t, env, b));
        return mk_add(gen(t, env, a), gen(t, env, b));
      }
      return leaf(t, env);
    }
    case Intro: {
      count("intro");
      if (t->kind == TypeKind::Prod) {
        auto [a, b] = split(rest);
        return mk_pair(gen(t->left, env, a), gen(t->right, env, b));
      }
      std::string x = fresh();
      Env inner = env;
      inner.push_back({x, t->left});
      return mk_lam(x, t->left, gen(t->right, inner, rest));
    }
    case Leaf: break;
  }
  return leaf(t, env);
}

TermPtr Generator::term(const TypePtr& t, std::size_t budget) { return gen(t, {}, std::max<std::size_t>(budget, 1)); }

TermPtr Generator::program(const TypePtr& target) {
  if (type_rank(target) > cfg_.max_order)
    throw DomainError("target type " + print_type(target) + " exceeds the generator's rank bound");
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::size_t budget = 1 + below(cfg_.max_term_size);
    TermPtr t = gen(target, {}, budget);
    if (term_size(t) <= cfg_.max_term_size) return t;
  }
  TermPtr t = closed_value(target);
  if (term_size(t) > cfg_.max_term_size)
    throw DomainError("no program of type " + print_type(target) + " fits in " + std::to_string(cfg_.max_term_size) +
                      " nodes");
  return t;
}

Context Generator::context(const TypePtr& hole_type, const TypePtr& result_type, std::size_t budget, bool wrap) {
  Context c;
  c.hole = fresh_name("hole");
  c.hole_type = hole_type;
  c.result_type = result_type;
  std::string x = fresh();
  TermPtr body = gen(result_type, {{x, hole_type}}, std::max<std::size_t>(budget, 1));
  c.body = mk_let(x, hole_type, mk_var(c.hole), body);
  if (!wrap) return c;
  switch (below(4)) {
    case 0: c.body = mk_or(term(result_type, 1 + below(4)), c.body); break;
    case 1: c.body = mk_reward(reward(), c.body); break;
    case 2:
      if (cfg_.mode == Mode::Prob) c.body = mk_pchoice(prob(), c.body, term(result_type, 1 + below(4)));
      break;
    default: break;
  }
  return c;
}

TermPtr Generator::effect_value(std::size_t nodes) {
  std::function<TermPtr(std::size_t)> build = [&](std::size_t n) -> TermPtr {
    TermPtr t;
    if (n == 0) {
      t = coin() ? mk_tt() : mk_ff();
    } else {
      std::size_t left = below(n);
      TermPtr a = build(left), b = build(n - 1 - left);
      t = (cfg_.mode == Mode::Prob && coin()) ? mk_pchoice(prob(), a, b) : mk_or(a, b);
    }
    if (coin(0.6)) t = mk_reward(reward(), t);
    return t;
  };
  return build(below(nodes + 1));
}

TermPtr Generator::tied_effect_value(std::size_t nodes) {
  TermPtr e = effect_value(nodes > 0 ? (nodes - 1) / 2 : 0);
  return mk_or(e, swap_booleans(e));
}

std::vector<RewardTable> Generator::gammas(const TypePtr& t, std::size_t count, const Signature& sig) {
  if (has_arrow(t)) throw DomainError("reward tables need a finite carrier; " + print_type(t) + " is a function type");
  std::vector<std::string> keys;
  try {
    keys = carrier_keys(t, sig);
  } catch (const DomainError&) {
    keys.clear();  // infinite carriers are covered by the hashed fallback
  }
  std::vector<RewardTable> out;
  if (count == 0) return out;
  out.push_back(zero_table());
  while (out.size() < count) {
    RewardTable g;
    for (const auto& k : keys) g.entries[k] = reward();
    g.fallback_pool = cfg_.reward_pool;
    g.fallback_seed = rng_();
    out.push_back(std::move(g));
  }
  return out;
}

TermPtr gen_program(const GenConfig& cfg, const TypePtr& target) {
  Generator g(cfg);
  return g.program(target);
}

std::vector<RewardTable> gen_gamma(const GenConfig& cfg, const TypePtr& t, std::size_t count) {
  Generator g(cfg);
  return g.gammas(t, count);
}

TermPtr swap_booleans(const TermPtr& e) {
  if (e->kind == TermKind::Const && e->constant.base == "Bool") return e->constant.index == 0 ? mk_ff() : mk_tt();
  TermPtr out = e;
  for (std::size_t i = e->params.size(); i < e->arity(); ++i) out = with_child(out, i, swap_booleans(e->child(i)));
  return out;
}

// ------------------------------------------------------------ axiom instances

namespace {

TermPtr mix_terms(const std::vector<Rational>& w, const std::vector<TermPtr>& ts) {
  TermPtr acc = ts.back();
  Rational rest = w.back();
  for (std::size_t k = ts.size() - 1; k-- > 0;) {
    rest += w[k];
    Rational p = w[k] / rest;
    p.canonicalize();
    acc = mk_pchoice(p, ts[k], acc);
  }
  return acc;
}

struct PRPair {
  TermPtr m, n;
};

// Two expectation PR-forms over the same leaf bodies and group masses.
PRPair pr_pair(Generator& g, const TypePtr& t) {
  std::size_t groups = 1 + g.below(2);
  std::vector<TermPtr> bodies;
  for (std::size_t i = 0; i < groups; ++i) {
    TermPtr body = g.term(t, 1 + g.below(5));
    bool dup = std::any_of(bodies.begin(), bodies.end(), [&](const TermPtr& b) { return alpha_equal(b, body); });
    if (!dup) bodies.push_back(body);
  }
  auto masses = g.partition(bodies.size());
  auto side = [&] {
    std::vector<TermPtr> parts;
    for (const auto& body : bodies) {
      std::size_t n = 1 + g.below(2);
      std::vector<TermPtr> leaves;
      for (std::size_t j = 0; j < n; ++j) leaves.push_back(mk_reward(g.reward(), body));
      parts.push_back(mix_terms(g.partition(n), leaves));
    }
    return mix_terms(masses, parts);
  };
  TermPtr m = side();
  return {m, side()};
}

TypePtr axiom_type(Generator& g) {
  switch (g.below(6)) {
    case 0: return prod_type(bool_type(), bool_type());
    case 1: return rew_type();
    default: return bool_type();
  }
}

}  // namespace

TermPtr instantiate_axiom(const std::string& name, Generator& g) {
  TypePtr t = axiom_type(g);
  auto sub = [&] { return g.term(t, 1 + g.below(7)); };
  auto amt = [&] { return mk_rew(g.reward()); };
  const bool prob = g.config().mode == Mode::Prob;

  if (name == "or-assoc") return mk_or(mk_or(sub(), sub()), sub());
  if (name == "or-idem") {
    TermPtr m = sub();
    return mk_or(m, m);
  }
  if (name == "reward-zero") return mk_reward(reward_zero(), sub());
  if (name == "reward-action") return mk_reward(amt(), mk_reward(amt(), sub()));
  if (name == "reward-or-dist") return mk_reward(amt(), mk_or(sub(), sub()));
  if (name == "if-reward-or") {
    TermPtr x = amt(), y = amt(), m = sub();
    return mk_if(mk_leq(y, x), mk_reward(x, m), mk_reward(y, m));
  }
  if (name == "if-reward-or-assoc") {
    TermPtr x = amt(), z = amt(), m = sub(), n = sub();
    return mk_if(mk_leq(z, x), mk_or(mk_reward(x, m), n), mk_or(n, mk_reward(z, m)));
  }
  if (name == "R1") {
    TermPtr m = sub();
    return mk_or(mk_reward(amt(), m), mk_reward(amt(), m));
  }
  if (name == "R2" || name == "R3") {
    Reward c = g.reward(), c2 = g.reward();
    while (c == c2) c2 = g.reward();
    bool want_left = name == "R2";
    if (leq(c2, c) != want_left) std::swap(c, c2);
    TermPtr m = sub();
    return mk_or(mk_or(mk_reward(c, m), sub()), mk_reward(c2, m));
  }

  if (!prob) throw DomainError("axiom " + name + " needs a probabilistic generator");
  if (name == "pchoice-one") return mk_pchoice(Rational(1), sub(), sub());
  if (name == "pchoice-comm") return mk_pchoice(g.prob(), sub(), sub());
  if (name == "pchoice-assoc") return mk_pchoice(g.prob(), mk_pchoice(g.prob(), sub(), sub()), sub());
  if (name == "pchoice-idem") {
    TermPtr m = sub();
    return mk_pchoice(g.prob(), m, m);
  }
  if (name == "reward-pchoice-dist") return mk_reward(amt(), mk_pchoice(g.prob(), sub(), sub()));
  if (name == "pchoice-or-dist") return mk_pchoice(g.prob(), sub(), mk_or(sub(), sub()));
  if (name == "if-exp-or") {
    auto [m, n] = pr_pair(g, t);
    return mk_if(mk_leq(expectation_term(n), expectation_term(m)), m, n);
  }
  if (name == "if-exp-or-assoc") {
    auto [m, n] = pr_pair(g, t);
    TermPtr p = sub();
    return mk_if(mk_leq(expectation_term(n), expectation_term(m)), mk_or(m, p), mk_or(p, n));
  }
  if (name == "PR1" || name == "PR2" || name == "PR3" || name == "PR4") {
    bool keep_left = name == "PR1" || name == "PR3";
    for (int attempt = 0; attempt < 200; ++attempt) {
      auto [m, n] = pr_pair(g, t);
      auto expectation = [](const TermPtr& side) {
        std::vector<std::pair<Rational, Reward>> terms;
        for (const auto& leaf : expectation_leaves(side)) terms.emplace_back(leaf.weight, leaf.amount->constant.value);
        return weighted_sum(terms);
      };
      Reward em = expectation(m), en = expectation(n);
      if (em == en && !keep_left) continue;
      if (leq(en, em) != keep_left) std::swap(m, n);
      if (name == "PR1" || name == "PR2") return mk_or(m, n);
      return mk_or(mk_or(m, sub()), n);
    }
    throw Error("internal: could not instantiate " + name);
  }
  if (name == "gather") {
    TermPtr m = sub();
    return mk_pchoice(g.prob(), mk_reward(amt(), m), mk_reward(amt(), m));
  }
  if (name == "gather-split") return mk_pchoice(g.prob(), mk_reward(amt(), sub()), mk_reward(amt(), sub()));
  throw DomainError("unknown axiom '" + name + "'");
}

}  // namespace selcalc
