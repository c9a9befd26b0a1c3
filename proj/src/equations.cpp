#include "selcalc/equations.hpp"

#include "selcalc/operational.hpp"
#include "selcalc/strategies.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace selcalc {

// ================================================================ rewards

bool operator==(const CanonEntry& a, const CanonEntry& b) {
  return a.reward == b.reward && alpha_equal(a.value, b.value);
}

namespace {

void flatten_rewards(const TermPtr& e, const Reward& acc, CanonicalForm& out) {
  if (is_value(e)) {
    if (e->kind != TermKind::Const) throw DomainError("canonical forms are defined at base types; found " + print_term(e));
    out.push_back({acc, e});
    return;
  }
  if (e->kind != TermKind::Op) throw DomainError("not an effect value: " + print_term(e));
  switch (e->op) {
    case OpSym::Or:
      flatten_rewards(e->kids[0], acc, out);
      flatten_rewards(e->kids[1], acc, out);
      return;
    case OpSym::Reward: {
      const TermPtr& amount = e->params[0];
      if (amount->kind != TermKind::Const || !amount->constant.is_rew())
        throw DomainError("reward amount is not a constant in effect value");
      flatten_rewards(e->kids[0], add(acc, amount->constant.value), out);
      return;
    }
    case OpSym::PChoice:
      throw DomainError("canonical forms belong to the rewards calculus; found probabilistic choice");
  }
}

TermPtr rew_leaf(const Reward& r, const TermPtr& v) { return mk_reward(r, v); }

}  // namespace

CanonicalForm canon_of_effect(const TermPtr& effect) {
  CanonicalForm flat;
  flatten_rewards(effect, reward_zero(), flat);
  CanonicalForm out;
  for (auto& entry : flat) {
    auto old = std::find_if(out.begin(), out.end(), [&](const CanonEntry& e) { return alpha_equal(e.value, entry.value); });
    if (old == out.end()) {
      out.push_back(std::move(entry));
    } else if (less(old->reward, entry.reward)) {
      out.erase(old);
      out.push_back(std::move(entry));
    }
  }
  return out;
}

CanonicalForm canon_rewards(const TermPtr& program) { return canon_of_effect(eval_effect(program)); }

TermPtr canonical_term(const CanonicalForm& cf) {
  if (cf.empty()) throw DomainError("empty canonical form");
  TermPtr t = rew_leaf(cf[0].reward, cf[0].value);
  for (std::size_t i = 1; i < cf.size(); ++i) t = mk_or(t, rew_leaf(cf[i].reward, cf[i].value));
  return t;
}

std::string print_canonical(const CanonicalForm& cf) { return print_term(canonical_term(cf)); }

bool decide_equiv_rewards(const TermPtr& m, const TermPtr& n) { return canon_rewards(m) == canon_rewards(n); }

std::optional<Const> decide_pure_rewards(const TermPtr& program) {
  CanonicalForm cf = canon_rewards(program);
  if (cf.size() == 1 && cf[0].reward == reward_zero() && cf[0].value->kind == TermKind::Const) return cf[0].value->constant;
  return std::nullopt;
}

RewardTable purity_witness_rewards(const TermPtr& program) {
  CanonicalForm cf = canon_rewards(program);
  if (decide_pure_rewards(program)) throw DomainError("the program is pure; there is no witness");
  std::size_t winner = 0;
  for (std::size_t i = 1; i < cf.size(); ++i)
    if (less(cf[winner].reward, cf[i].reward)) winner = i;
  if (cf[winner].reward != reward_zero()) return zero_table();
  if (cf.size() == 1) throw DomainError("the program always returns " + print_term(cf[0].value) + " with no reward");
  std::size_t other = winner == 0 ? 1 : 0;
  const Reward& c = cf[other].reward;
  Reward lift;
  switch (active_structure()) {
    case Structure::AddRationals: lift = 1 - c; break;
    case Structure::NonNegAdd: lift = 1; break;
    case Structure::MulPositiveRationals: lift = 2 / c; break;
  }
  lift.canonicalize();
  RewardTable g;
  g.entries[print_value_key(cf[other].value)] = lift;
  return g;
}

TermPtr Context::plug(const TermPtr& t) const { return substitute(body, hole, t); }

std::string Context::print() const { return print_term(substitute(body, hole, mk_var("[-]"))); }

namespace {

std::optional<std::size_t> find_value(const CanonicalForm& cf, const TermPtr& v) {
  for (std::size_t i = 0; i < cf.size(); ++i)
    if (alpha_equal(cf[i].value, v)) return i;
  return std::nullopt;
}

Reward max_reward(const std::vector<Reward>& rs) {
  Reward best = rs.at(0);
  for (const auto& r : rs)
    if (less(best, r)) best = r;
  return best;
}

// if [-] == d then (c + r) . tt else (c_i0 + l) . tt
Context separate_by_value(const CanonicalForm& x, const CanonicalForm& y, std::size_t i0, const TypePtr& base) {
  std::vector<Reward> others;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != i0) others.push_back(x[i].reward);
  for (const auto& e : y) others.push_back(e.reward);
  Reward c = max_reward(others);
  Reward l = reward_zero(), r = above_zero();
  std::string hole = fresh_name("hole");
  TermPtr body = mk_if(mk_eq(mk_var(hole), x[i0].value), mk_reward(add(c, r), mk_tt()), mk_reward(add(x[i0].reward, l), mk_tt()));
  return {hole, base, bool_type(), body};
}

// let x = [-] in if x == d then (c + c'_i0 + r) . tt else if x == d' then (c + c_i0 + r) . ff else (c_i0 + c'_i0 + l) . ff
Context separate_by_order(const CanonicalForm& a, const CanonicalForm& b, const TypePtr& base) {
  std::size_t i0 = 0;
  while (i0 < a.size() && a[i0] == b[i0]) ++i0;
  std::vector<Reward> others;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != i0) others.push_back(a[i].reward);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (i != i0) others.push_back(b[i].reward);
  Reward c = max_reward(others);
  const Reward &ca = a[i0].reward, &cb = b[i0].reward;
  Reward l = reward_zero(), r = above_zero();
  std::string hole = fresh_name("hole");
  std::string x = fresh_name("x");
  TermPtr inner = mk_if(mk_eq(mk_var(x), b[i0].value), mk_reward(add(add(c, ca), r), mk_ff()),
                        mk_reward(add(add(ca, cb), l), mk_ff()));
  TermPtr body = mk_if(mk_eq(mk_var(x), a[i0].value), mk_reward(add(add(c, cb), r), mk_tt()), inner);
  return {hole, base, bool_type(), mk_let(x, base, mk_var(hole), body)};
}

}  // namespace

Context distinguish_rewards(const CanonicalForm& a, const CanonicalForm& b, const TypePtr& base) {
  if (a == b) throw DomainError("canonical forms are equal; nothing to distinguish");
  if (a.empty() || b.empty()) throw DomainError("empty canonical form");
  for (int side = 0; side < 2; ++side) {
    const CanonicalForm& x = side == 0 ? a : b;
    const CanonicalForm& y = side == 0 ? b : a;
    for (std::size_t i0 = 0; i0 < x.size(); ++i0) {
      auto j = find_value(y, x[i0].value);
      if (!j || less(x[i0].reward, y[*j].reward)) return separate_by_value(x, y, i0, base);
    }
  }
  if (a.size() != b.size()) throw Error("internal: canonical forms with equal entries differ in length");
  return separate_by_order(a, b, base);
}

// ========================================================== probabilistic

const char* prob_monad_name(ProbMonad m) {
  switch (m) {
    case ProbMonad::T1: return "T1";
    case ProbMonad::T2: return "T2";
    case ProbMonad::T3: return "T3";
  }
  return "?";
}

ProbMonad prob_monad_from_name(const std::string& name) {
  if (name == "T1" || name == "t1" || name == "DW" || name == "dw") return ProbMonad::T1;
  if (name == "T2" || name == "t2") return ProbMonad::T2;
  if (name == "T3" || name == "t3") return ProbMonad::T3;
  throw DomainError("unknown probabilistic monad '" + name + "' (expected T1, T2, or T3)");
}

bool operator==(const PRNormal& a, const PRNormal& b) {
  if (a.monad != b.monad) return false;
  switch (a.monad) {
    case ProbMonad::T1: return a.t1 == b.t1;
    case ProbMonad::T2: return a.t2 == b.t2;
    case ProbMonad::T3: return a.t3 == b.t3;
  }
  return false;
}

PRNormal normalize_pr(const PRValue& v, ProbMonad m) {
  PRNormal n;
  n.monad = m;
  switch (m) {
    case ProbMonad::T1: n.t1 = v; break;
    case ProbMonad::T2: n.t2 = T2Monad::from_dw(v); break;
    case ProbMonad::T3: n.t3 = T3Monad::from_dw(v); break;
  }
  return n;
}

namespace {

std::optional<Const> const_of(const ValueKey& k) {
  if (k.term->kind != TermKind::Const) return std::nullopt;
  return k.term->constant;
}

struct WeightedAtom {
  Rational weight;
  Reward reward;
  TermPtr value;
};

std::vector<WeightedAtom> atoms_of(const PRNormal& n) {
  std::vector<WeightedAtom> out;
  switch (n.monad) {
    case ProbMonad::T1:
      for (const auto& [a, p] : n.t1.atoms) out.push_back({p, a.reward, a.value.term});
      break;
    case ProbMonad::T2:
      for (const auto& a : n.t2.atoms) out.push_back({a.prob, a.rew, a.value.term});
      break;
    case ProbMonad::T3:
      for (const auto& [x, p] : n.t3.dist.atoms) out.push_back({p, n.t3.rew, x.term});
      break;
  }
  return out;
}

}  // namespace

std::optional<Const> pure_constant(const PRNormal& n) {
  auto atoms = atoms_of(n);
  if (atoms.size() != 1 || atoms[0].reward != reward_zero()) return std::nullopt;
  return const_of(ValueKey{atoms[0].value});
}

Reward syntactic_expectation(const PRValue& v) { return expect0(v); }

Reward pr_expectation(const PRValue& v, const RewardTable& gamma) {
  std::vector<std::pair<Rational, Reward>> terms;
  for (const auto& [a, p] : v.atoms) terms.emplace_back(p, add(a.reward, gamma(print_value_key(a.value.term))));
  return weighted_sum(terms);
}

TermPtr pr_term(const PRNormal& n) {
  auto atoms = atoms_of(n);
  auto leaf = [](const WeightedAtom& a) { return a.reward == reward_zero() ? a.value : mk_reward(a.reward, a.value); };
  TermPtr acc = leaf(atoms.back());
  Rational rest = atoms.back().weight;
  for (std::size_t k = atoms.size() - 1; k-- > 0;) {
    rest += atoms[k].weight;
    Rational p = atoms[k].weight / rest;
    p.canonicalize();
    acc = mk_pchoice(p, leaf(atoms[k]), acc);
  }
  return acc;
}

namespace {

std::vector<PRValue> pr_branches(const TermPtr& e) {
  if (is_value(e)) {
    if (e->kind != TermKind::Const) throw DomainError("weak canonical forms are defined at base types; found " + print_term(e));
    return {DWMonad::unit(ValueKey{e})};
  }
  if (e->kind != TermKind::Op) throw DomainError("not an effect value: " + print_term(e));
  switch (e->op) {
    case OpSym::Or: {
      auto left = pr_branches(e->kids[0]);
      auto right = pr_branches(e->kids[1]);
      left.insert(left.end(), right.begin(), right.end());
      return left;
    }
    case OpSym::Reward: {
      const Reward& r = e->params[0]->constant.value;
      auto out = pr_branches(e->kids[0]);
      for (auto& u : out) u = DWMonad::reward(r, u);
      return out;
    }
    case OpSym::PChoice: {
      auto left = pr_branches(e->kids[0]);
      auto right = pr_branches(e->kids[1]);
      std::vector<PRValue> out;
      for (const auto& b : right)
        for (const auto& a : left) out.push_back(DWMonad::pchoice(e->prob, a, b));
      return out;
    }
  }
  throw DomainError("unknown effect operation");
}

}  // namespace

WeakCanonicalForm weak_canon_of_effect(const TermPtr& effect, ProbMonad m) {
  if (m == ProbMonad::T3) T3Monad::require_supported();
  WeakCanonicalForm w;
  w.monad = m;
  for (auto& b : pr_branches(effect)) {
    PRNormal n = normalize_pr(b, m);
    if (std::find(w.normals.begin(), w.normals.end(), n) != w.normals.end()) continue;
    w.branches.push_back(std::move(b));
    w.normals.push_back(std::move(n));
  }
  return w;
}

WeakCanonicalForm weak_canon_prob(const TermPtr& program, ProbMonad m) {
  return weak_canon_of_effect(eval_effect(program), m);
}

TermPtr weak_canon_term(const WeakCanonicalForm& w) {
  if (w.normals.empty()) throw DomainError("empty weak canonical form");
  TermPtr t = pr_term(w.normals[0]);
  for (std::size_t i = 1; i < w.normals.size(); ++i) t = mk_or(t, pr_term(w.normals[i]));
  return t;
}

std::string print_weak_canonical(const WeakCanonicalForm& w) { return print_term(weak_canon_term(w)); }

PurityVerdict decide_pure_prob(const TermPtr& program, ProbMonad m) {
  WeakCanonicalForm w = weak_canon_prob(program, m);
  std::vector<std::size_t> live(w.branches.size());
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = i;

  auto selected = [&](const std::function<Reward(std::size_t)>& score) {
    return live[argmax_index(live, score)];
  };

  while (true) {
    std::size_t i0 = selected([&](std::size_t i) { return syntactic_expectation(w.branches[i]); });
    auto cbar = pure_constant(w.normals[i0]);
    if (!cbar) return {std::nullopt, zero_table(), "the branch chosen at the zero reward table is not pure"};
    if (live.size() == 1) return {cbar, std::nullopt, "pure"};

    std::size_t i1 = live[0] == i0 ? live[1] : live[0];
    const PRValue& other = w.branches[i1];
    const std::string cbar_key = print_const(*cbar);
    auto is_cbar = [&](const Rewarded<ValueKey>& a) { return const_of(a.value) == cbar; };

    if (std::all_of(other.atoms.begin(), other.atoms.end(), [&](const auto& a) { return is_cbar(a.first); })) {
      // Both branches are expectation PR-values over c-bar; the zero-table winner survives.
      live.erase(std::find(live.begin(), live.end(), i1));
      continue;
    }

    Reward r0 = other.atoms[0].first.reward;
    Rational off_mass = 0;
    bool touches_cbar = false;
    for (const auto& [a, p] : other.atoms) {
      if (less(a.reward, r0)) r0 = a.reward;
      if (is_cbar(a))
        touches_cbar = true;
      else
        off_mass += p;
    }

    RewardTable gamma;
    Reward l = reward_zero(), r = above_zero();
    if (!touches_cbar) {
      gamma.entries[cbar_key] = add(r0, l);
    } else {
      if (less(r0, reward_zero())) std::tie(l, r) = condition_c_witness(off_mass, r0);
      gamma.entries[cbar_key] = l;
    }
    gamma.fallback_pool = {r};
    for (const auto& branch : w.branches)
      for (const auto& [a, p] : branch.atoms) gamma.entries.emplace(print_value_key(a.value.term), r);

    if (!less(pr_expectation(w.branches[i0], gamma), pr_expectation(other, gamma)))
      throw Error("internal: constructed reward table does not favour the competing branch");

    std::size_t i2 = selected([&](std::size_t i) { return pr_expectation(w.branches[i], gamma); });
    if (i2 == i0) throw Error("internal: the zero-table branch is still selected at the constructed table");
    auto c2 = pure_constant(w.normals[i2]);
    if (!c2 || *c2 != *cbar)
      return {std::nullopt, gamma, "a different branch is chosen at the witness reward table"};
    live.erase(std::find(live.begin(), live.end(), i2));
  }
}

// ============================================== expectation PR-forms, axioms

namespace {

bool is_op(const TermPtr& t, OpSym op) { return t->kind == TermKind::Op && t->op == op; }

bool is_amount(const TermPtr& t) {
  return (t->kind == TermKind::Const && t->constant.is_rew()) || t->kind == TermKind::Var;
}

bool is_const_amount(const TermPtr& t) { return t->kind == TermKind::Const && t->constant.is_rew(); }

void collect_leaves(const TermPtr& t, const Rational& w, std::vector<PRLeaf>& out) {
  if (is_op(t, OpSym::PChoice)) {
    collect_leaves(t->kids[0], w * t->prob, out);
    collect_leaves(t->kids[1], w * (1 - t->prob), out);
  } else if (is_op(t, OpSym::Reward) && is_amount(t->params[0])) {
    out.push_back({w, t->params[0], t->kids[0]});
  } else {
    out.push_back({w, mk_rew(reward_zero()), t});
  }
}

std::vector<std::pair<TermPtr, Rational>> leaf_groups(const std::vector<PRLeaf>& leaves) {
  std::vector<std::pair<TermPtr, Rational>> groups;
  for (const auto& leaf : leaves) {
    if (leaf.weight == 0) continue;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return alpha_equal(g.first, leaf.body); });
    if (it == groups.end())
      groups.emplace_back(leaf.body, leaf.weight);
    else
      it->second += leaf.weight;
  }
  return groups;
}

}  // namespace

std::vector<PRLeaf> expectation_leaves(const TermPtr& t) {
  std::vector<PRLeaf> out;
  collect_leaves(t, Rational(1), out);
  return out;
}

TermPtr expectation_term(const TermPtr& t) {
  if (is_op(t, OpSym::PChoice)) return mk_oplus(t->prob, expectation_term(t->kids[0]), expectation_term(t->kids[1]));
  if (is_op(t, OpSym::Reward) && is_amount(t->params[0])) return t->params[0];
  return mk_rew(reward_zero());
}

bool same_pr_skeleton(const TermPtr& m, const TermPtr& n) {
  auto gm = leaf_groups(expectation_leaves(m));
  auto gn = leaf_groups(expectation_leaves(n));
  if (gm.size() != gn.size()) return false;
  for (const auto& [body, mass] : gm) {
    auto it = std::find_if(gn.begin(), gn.end(), [&](const auto& g) { return alpha_equal(g.first, body); });
    if (it == gn.end() || it->second != mass) return false;
  }
  return true;
}

namespace {

std::optional<Reward> evaluated_expectation(const TermPtr& t) {
  std::vector<std::pair<Rational, Reward>> terms;
  for (const auto& leaf : expectation_leaves(t)) {
    if (!is_const_amount(leaf.amount)) return std::nullopt;
    terms.emplace_back(leaf.weight, leaf.amount->constant.value);
  }
  return weighted_sum(terms);
}

TermPtr sum_amounts(const TermPtr& x, const TermPtr& y) {
  if (is_const_amount(x) && is_const_amount(y)) return mk_rew(add(x->constant.value, y->constant.value));
  return mk_add(x, y);
}

TermPtr mix_amounts(const Rational& p, const TermPtr& x, const TermPtr& y) {
  if (is_const_amount(x) && is_const_amount(y)) return mk_rew(convex(p, x->constant.value, y->constant.value));
  return mk_oplus(p, x, y);
}

bool same(const TermPtr& a, const TermPtr& b) { return alpha_equal(a, b); }

bool is_leq(const TermPtr& t) { return t->kind == TermKind::Fn && t->fn == FnSym::Leq; }

using Rule = std::function<std::optional<TermPtr>(const TermPtr&)>;

struct RuleEntry {
  AxiomInfo info;
  Rule rule;
};

// PR1-PR4 need both sides to be expectation PR-forms over the same leaves with constant amounts.
std::optional<std::pair<Reward, Reward>> pr_compare(const TermPtr& m, const TermPtr& n) {
  if (!same_pr_skeleton(m, n)) return std::nullopt;
  auto em = evaluated_expectation(m), en = evaluated_expectation(n);
  if (!em || !en) return std::nullopt;
  return std::make_pair(*em, *en);
}

const std::vector<RuleEntry>& rules() {
  static const std::vector<RuleEntry> table = [] {
    std::vector<RuleEntry> v;
    auto add_rule = [&](std::string name, AxiomFamily fam, std::string shape, Rule rule) {
      v.push_back({{std::move(name), fam, std::move(shape)}, std::move(rule)});
    };
    using F = AxiomFamily;
    using R = std::optional<TermPtr>;

    add_rule("or-assoc", F::Rewards, "(L or M) or N = L or (M or N)", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Or) || !is_op(t->kids[0], OpSym::Or)) return std::nullopt;
      return mk_or(t->kids[0]->kids[0], mk_or(t->kids[0]->kids[1], t->kids[1]));
    });
    add_rule("or-idem", F::Rewards, "M or M = M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Or) || !same(t->kids[0], t->kids[1])) return std::nullopt;
      return t->kids[0];
    });
    add_rule("reward-zero", F::Rewards, "0 . N = N", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Reward) || !is_const_amount(t->params[0])) return std::nullopt;
      if (t->params[0]->constant.value != reward_zero()) return std::nullopt;
      return t->kids[0];
    });
    add_rule("reward-action", F::Rewards, "x . (y . N) = (x + y) . N", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Reward) || !is_op(t->kids[0], OpSym::Reward)) return std::nullopt;
      const TermPtr &x = t->params[0], &y = t->kids[0]->params[0];
      if (!is_amount(x) || !is_amount(y)) return std::nullopt;
      return mk_reward(sum_amounts(x, y), t->kids[0]->kids[0]);
    });
    add_rule("reward-or-dist", F::Rewards, "x . (M or N) = (x . M) or (x . N)", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Reward) || !is_amount(t->params[0]) || !is_op(t->kids[0], OpSym::Or)) return std::nullopt;
      const TermPtr& x = t->params[0];
      return mk_or(mk_reward(x, t->kids[0]->kids[0]), mk_reward(x, t->kids[0]->kids[1]));
    });
    add_rule("if-reward-or", F::Rewards, "if y <= x then x . M else y . M = (x . M) or (y . M)", [](const TermPtr& t) -> R {
      if (t->kind != TermKind::If || !is_leq(t->kids[0])) return std::nullopt;
      const TermPtr &y = t->kids[0]->kids[0], &x = t->kids[0]->kids[1];
      const TermPtr &th = t->kids[1], &el = t->kids[2];
      if (!is_amount(x) || !is_amount(y) || !is_op(th, OpSym::Reward) || !is_op(el, OpSym::Reward)) return std::nullopt;
      if (!same(th->params[0], x) || !same(el->params[0], y) || !same(th->kids[0], el->kids[0])) return std::nullopt;
      return mk_or(th, el);
    });
    add_rule("if-reward-or-assoc", F::Rewards,
             "if z <= x then (x . M or N) else (N or z . M) = ((x . M) or N) or (z . M)", [](const TermPtr& t) -> R {
               if (t->kind != TermKind::If || !is_leq(t->kids[0])) return std::nullopt;
               const TermPtr &z = t->kids[0]->kids[0], &x = t->kids[0]->kids[1];
               const TermPtr &th = t->kids[1], &el = t->kids[2];
               if (!is_amount(x) || !is_amount(z) || !is_op(th, OpSym::Or) || !is_op(el, OpSym::Or)) return std::nullopt;
               const TermPtr &xm = th->kids[0], &zm = el->kids[1];
               if (!is_op(xm, OpSym::Reward) || !is_op(zm, OpSym::Reward)) return std::nullopt;
               if (!same(xm->params[0], x) || !same(zm->params[0], z) || !same(xm->kids[0], zm->kids[0])) return std::nullopt;
               if (!same(th->kids[1], el->kids[0])) return std::nullopt;
               return mk_or(th, zm);
             });

    add_rule("R1", F::RewardsDerived, "c . M or c' . M = max(c, c') . M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Or)) return std::nullopt;
      const TermPtr &a = t->kids[0], &b = t->kids[1];
      if (!is_op(a, OpSym::Reward) || !is_op(b, OpSym::Reward)) return std::nullopt;
      if (!is_const_amount(a->params[0]) || !is_const_amount(b->params[0]) || !same(a->kids[0], b->kids[0]))
        return std::nullopt;
      const Reward &c = a->params[0]->constant.value, &c2 = b->params[0]->constant.value;
      return mk_reward(less(c, c2) ? c2 : c, a->kids[0]);
    });
    auto r23 = [](bool keep_left) {
      return [keep_left](const TermPtr& t) -> R {
        if (!is_op(t, OpSym::Or) || !is_op(t->kids[0], OpSym::Or)) return std::nullopt;
        const TermPtr &cm = t->kids[0]->kids[0], &n = t->kids[0]->kids[1], &cm2 = t->kids[1];
        if (!is_op(cm, OpSym::Reward) || !is_op(cm2, OpSym::Reward)) return std::nullopt;
        if (!is_const_amount(cm->params[0]) || !is_const_amount(cm2->params[0]) || !same(cm->kids[0], cm2->kids[0]))
          return std::nullopt;
        bool left_wins = leq(cm2->params[0]->constant.value, cm->params[0]->constant.value);
        if (left_wins != keep_left) return std::nullopt;
        return keep_left ? t->kids[0] : mk_or(n, cm2);
      };
    };
    add_rule("R2", F::RewardsDerived, "(c . M or N) or c' . M = c . M or N  (c >= c')", r23(true));
    add_rule("R3", F::RewardsDerived, "(c . M or N) or c' . M = N or c' . M  (c < c')", r23(false));

    add_rule("pchoice-one", F::Prob, "M +[1] N = M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::PChoice) || t->prob != 1) return std::nullopt;
      return t->kids[0];
    });
    add_rule("pchoice-comm", F::Prob, "M +[p] N = N +[1-p] M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::PChoice)) return std::nullopt;
      return mk_pchoice(1 - t->prob, t->kids[1], t->kids[0]);
    });
    add_rule("pchoice-assoc", F::Prob, "(M +[p] N) +[q] P = M +[pq] (N +[(q-pq)/(1-pq)] P)  (p, q < 1)",
             [](const TermPtr& t) -> R {
               if (!is_op(t, OpSym::PChoice) || !is_op(t->kids[0], OpSym::PChoice)) return std::nullopt;
               const Rational &q = t->prob, &p = t->kids[0]->prob;
               if (p >= 1 || q >= 1) return std::nullopt;
               Rational pq = p * q;
               Rational inner = (q - pq) / (1 - pq);
               pq.canonicalize();
               inner.canonicalize();
               return mk_pchoice(pq, t->kids[0]->kids[0], mk_pchoice(inner, t->kids[0]->kids[1], t->kids[1]));
             });
    add_rule("pchoice-idem", F::Prob, "M +[p] M = M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::PChoice) || !same(t->kids[0], t->kids[1])) return std::nullopt;
      return t->kids[0];
    });
    add_rule("reward-pchoice-dist", F::Prob, "x . (M +[p] N) = (x . M) +[p] (x . N)", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::Reward) || !is_amount(t->params[0]) || !is_op(t->kids[0], OpSym::PChoice)) return std::nullopt;
      const TermPtr& x = t->params[0];
      const TermPtr& pc = t->kids[0];
      return mk_pchoice(pc->prob, mk_reward(x, pc->kids[0]), mk_reward(x, pc->kids[1]));
    });
    add_rule("pchoice-or-dist", F::Prob, "L +[p] (M or N) = (L +[p] M) or (L +[p] N)", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::PChoice) || !is_op(t->kids[1], OpSym::Or)) return std::nullopt;
      const TermPtr& l = t->kids[0];
      return mk_or(mk_pchoice(t->prob, l, t->kids[1]->kids[0]), mk_pchoice(t->prob, l, t->kids[1]->kids[1]));
    });
    add_rule("if-exp-or", F::Prob, "if Es(N) <= Es(M) then M else N = M or N", [](const TermPtr& t) -> R {
      if (t->kind != TermKind::If || !is_leq(t->kids[0])) return std::nullopt;
      const TermPtr &m = t->kids[1], &n = t->kids[2];
      if (!same_pr_skeleton(m, n)) return std::nullopt;
      if (!same(t->kids[0]->kids[0], expectation_term(n)) || !same(t->kids[0]->kids[1], expectation_term(m)))
        return std::nullopt;
      return mk_or(m, n);
    });
    add_rule("if-exp-or-assoc", F::Prob, "if Es(N) <= Es(M) then (M or P) else (P or N) = (M or P) or N",
             [](const TermPtr& t) -> R {
               if (t->kind != TermKind::If || !is_leq(t->kids[0])) return std::nullopt;
               const TermPtr &th = t->kids[1], &el = t->kids[2];
               if (!is_op(th, OpSym::Or) || !is_op(el, OpSym::Or) || !same(th->kids[1], el->kids[0])) return std::nullopt;
               const TermPtr &m = th->kids[0], &n = el->kids[1];
               if (!same_pr_skeleton(m, n)) return std::nullopt;
               if (!same(t->kids[0]->kids[0], expectation_term(n)) || !same(t->kids[0]->kids[1], expectation_term(m)))
                 return std::nullopt;
               return mk_or(th, n);
             });

    auto pr12 = [](bool keep_left) {
      return [keep_left](const TermPtr& t) -> R {
        if (!is_op(t, OpSym::Or)) return std::nullopt;
        auto cmp = pr_compare(t->kids[0], t->kids[1]);
        if (!cmp || leq(cmp->second, cmp->first) != keep_left) return std::nullopt;
        return keep_left ? t->kids[0] : t->kids[1];
      };
    };
    auto pr34 = [](bool keep_left) {
      return [keep_left](const TermPtr& t) -> R {
        if (!is_op(t, OpSym::Or) || !is_op(t->kids[0], OpSym::Or)) return std::nullopt;
        const TermPtr &m = t->kids[0]->kids[0], &l = t->kids[0]->kids[1], &n = t->kids[1];
        auto cmp = pr_compare(m, n);
        if (!cmp || leq(cmp->second, cmp->first) != keep_left) return std::nullopt;
        return keep_left ? t->kids[0] : mk_or(l, n);
      };
    };
    add_rule("PR1", F::ProbDerived, "M or N = M  (Es(M) >= Es(N))", pr12(true));
    add_rule("PR2", F::ProbDerived, "M or N = N  (Es(M) < Es(N))", pr12(false));
    add_rule("PR3", F::ProbDerived, "(M or L) or N = M or L  (Es(M) >= Es(N))", pr34(true));
    add_rule("PR4", F::ProbDerived, "(M or L) or N = L or N  (Es(M) < Es(N))", pr34(false));

    add_rule("gather", F::T2, "x . M +[p] y . M = (x oplus[p] y) . M", [](const TermPtr& t) -> R {
      if (!is_op(t, OpSym::PChoice)) return std::nullopt;
      const TermPtr &a = t->kids[0], &b = t->kids[1];
      if (!is_op(a, OpSym::Reward) || !is_op(b, OpSym::Reward) || !is_amount(a->params[0]) || !is_amount(b->params[0]))
        return std::nullopt;
      if (!same(a->kids[0], b->kids[0])) return std::nullopt;
      return mk_reward(mix_amounts(t->prob, a->params[0], b->params[0]), a->kids[0]);
    });
    add_rule("gather-split", F::T3, "x . M +[p] y . N = (x oplus[p] y) . M +[p] (x oplus[p] y) . N",
             [](const TermPtr& t) -> R {
               if (!is_op(t, OpSym::PChoice)) return std::nullopt;
               const TermPtr &a = t->kids[0], &b = t->kids[1];
               if (!is_op(a, OpSym::Reward) || !is_op(b, OpSym::Reward) || !is_amount(a->params[0]) ||
                   !is_amount(b->params[0]))
                 return std::nullopt;
               TermPtr z = mix_amounts(t->prob, a->params[0], b->params[0]);
               return mk_pchoice(t->prob, mk_reward(z, a->kids[0]), mk_reward(z, b->kids[0]));
             });
    return v;
  }();
  return table;
}

TermPtr rewrite_at(const TermPtr& t, const std::vector<std::size_t>& pos, std::size_t depth, const RuleEntry& rule) {
  if (depth == pos.size()) {
    auto out = rule.rule(t);
    if (!out) throw NoMatch("axiom " + rule.info.name + " does not match " + print_term(t));
    return *out;
  }
  std::size_t i = pos[depth];
  if (i >= t->arity()) throw NoMatch("position leaves the term at depth " + std::to_string(depth));
  return with_child(t, i, rewrite_at(t->child(i), pos, depth + 1, rule));
}

}  // namespace

const std::vector<AxiomInfo>& axiom_catalog() {
  static const std::vector<AxiomInfo> catalog = [] {
    std::vector<AxiomInfo> out;
    for (const auto& r : rules()) out.push_back(r.info);
    return out;
  }();
  return catalog;
}

TermPtr apply_axiom(const std::string& name, const TermPtr& m, const std::vector<std::size_t>& position) {
  for (const auto& r : rules())
    if (r.info.name == name) return rewrite_at(m, position, 0, r);
  throw DomainError("unknown axiom '" + name + "'");
}

}  // namespace selcalc
