#include "selcalc/operational.hpp"

namespace selcalc {

TermPtr plug(const EvalContext& ctx, TermPtr t) {
  for (std::size_t i = ctx.size(); i-- > 0;) t = with_child(ctx[i].parent, ctx[i].slot, std::move(t));
  return t;
}

namespace {

// Index of the first immediate subterm that is evaluated before the node reduces and is not yet a value.
std::optional<std::size_t> pending_child(const TermPtr& t) {
  std::size_t limit = 0;
  switch (t->kind) {
    case TermKind::Fn:
    case TermKind::Pair:
    case TermKind::App: limit = t->kids.size(); break;
    case TermKind::If:
    case TermKind::Fst:
    case TermKind::Snd: limit = 1; break;
    case TermKind::Op: limit = t->params.size(); break;
    default: return std::nullopt;
  }
  for (std::size_t i = 0; i < limit; ++i)
    if (!is_value(t->child(i))) return i;
  return std::nullopt;
}

}  // namespace

Decomposition decompose(const TermPtr& program) {
  Decomposition d;
  TermPtr cur = program;
  for (;;) {
    if (cur->kind == TermKind::Var) throw EvalError("cannot evaluate open term: free variable '" + cur->var + "'");
    if (is_value(cur)) {
      if (d.context.empty()) {
        d.already_value = true;
        d.redex = cur;
        return d;
      }
      throw EvalError("internal: decomposition reached a value inside a context");
    }
    auto i = pending_child(cur);
    if (!i) {
      d.redex = cur;
      return d;
    }
    d.context.push_back({cur, *i});
    cur = cur->child(*i);
  }
}

Const apply_fn(FnSym f, const Rational& p, const Const& a, const Const& b) {
  switch (f) {
    case FnSym::Add:
      if (!a.is_rew() || !b.is_rew()) throw EvalError("'+' applied to non-reward constants");
      return rew_const(add(a.value, b.value));
    case FnSym::Oplus:
      if (!a.is_rew() || !b.is_rew()) throw EvalError("'oplus' applied to non-reward constants");
      return rew_const(convex(p, a.value, b.value));
    case FnSym::Leq:
      if (!a.is_rew() || !b.is_rew()) throw EvalError("'<=' applied to non-reward constants");
      return bool_const(leq(a.value, b.value));
    case FnSym::Eq: return bool_const(a == b);
  }
  throw EvalError("unknown function symbol");
}

namespace {

TermPtr contract(const TermPtr& r) {
  switch (r->kind) {
    case TermKind::Fn: {
      const TermPtr &a = r->kids[0], &b = r->kids[1];
      if (a->kind != TermKind::Const || b->kind != TermKind::Const)
        throw EvalError("function symbol applied to non-constant values");
      return mk_const(apply_fn(r->fn, r->prob, a->constant, b->constant));
    }
    case TermKind::If: {
      const TermPtr& c = r->kids[0];
      if (c->kind != TermKind::Const || c->constant.base != "Bool") throw EvalError("conditional on a non-boolean");
      return c->constant.index == 0 ? r->kids[1] : r->kids[2];
    }
    case TermKind::Fst:
    case TermKind::Snd: {
      const TermPtr& p = r->kids[0];
      if (p->kind != TermKind::Pair) throw EvalError("projection from a non-pair");
      return r->kind == TermKind::Fst ? p->kids[0] : p->kids[1];
    }
    case TermKind::App: {
      const TermPtr& f = r->kids[0];
      if (f->kind != TermKind::Lam) throw EvalError("application of a non-function");
      return substitute(f->kids[0], f->var, r->kids[1]);
    }
    default: throw EvalError("internal: not a redex");
  }
}

}  // namespace

StepResult step(const TermPtr& program) {
  Decomposition d = decompose(program);
  StepResult res;
  if (d.already_value) {
    res.kind = StepKind::AlreadyValue;
    res.term = d.redex;
    return res;
  }
  if (d.redex->kind == TermKind::Op) {
    res.kind = StepKind::Branch;
    res.op = d.redex->op;
    res.prob = d.redex->prob;
    for (const auto& p : d.redex->params) {
      if (p->kind != TermKind::Const) throw EvalError("operation parameter is not a constant");
      res.params.push_back(p->constant);
    }
    for (const auto& k : d.redex->kids) res.branches.push_back(plug(d.context, k));
    return res;
  }
  res.kind = StepKind::Ordinary;
  res.term = plug(d.context, contract(d.redex));
  return res;
}

namespace {

TermPtr eval_rec(TermPtr t, std::size_t& budget, const TraceFn& trace) {
  for (;;) {
    if (trace) trace(t);
    StepResult s = step(t);
    if (s.kind == StepKind::AlreadyValue) return s.term;
    if (budget == 0) throw BudgetExceeded("step budget exhausted");
    --budget;
    if (s.kind == StepKind::Ordinary) {
      t = s.term;
      continue;
    }
    std::vector<TermPtr> kids;
    for (const auto& b : s.branches) kids.push_back(eval_rec(b, budget, trace));
    switch (s.op) {
      case OpSym::Or: return mk_or(kids[0], kids[1]);
      case OpSym::Reward: return mk_reward(mk_const(s.params[0]), kids[0]);
      case OpSym::PChoice: return mk_pchoice(s.prob, kids[0], kids[1]);
    }
  }
}

}  // namespace

TermPtr eval_effect(const TermPtr& program, std::size_t budget, const TraceFn& trace) {
  return eval_rec(program, budget, trace);
}

}  // namespace selcalc
