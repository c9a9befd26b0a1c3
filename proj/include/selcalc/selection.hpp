#pragma once

#include "selcalc/gamma.hpp"
#include "selcalc/monads.hpp"
#include "selcalc/operational.hpp"
#include "selcalc/strategies.hpp"
#include "selcalc/syntax.hpp"

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <type_traits>

namespace selcalc {

template <class M>
class SemVal;

template <class M>
using TVal = typename M::template V<SemVal<M>>;

template <class M>
using Gamma = std::function<Reward(const SemVal<M>&)>;

// A selection computation: reward continuation in, auxiliary-monad value out.
template <class M>
using SelComp = std::function<TVal<M>(const Gamma<M>&)>;

template <class M>
class SemVal {
 public:
  enum class Kind { Base, Unit, Pair, Fn };
  using FnType = std::function<SelComp<M>(const SemVal&)>;

  static SemVal base(const Const& c) {
    SemVal v(Kind::Base);
    v.c_ = c;
    return v;
  }
  static SemVal unit() { return SemVal(Kind::Unit); }
  static SemVal pair(const SemVal& a, const SemVal& b) {
    SemVal v(Kind::Pair);
    v.pair_ = std::make_shared<const std::pair<SemVal, SemVal>>(a, b);
    return v;
  }
  static SemVal fn(FnType f) {
    static std::atomic<unsigned long> counter{0};
    SemVal v(Kind::Fn);
    v.fn_ = std::make_shared<const FnType>(std::move(f));
    v.id_ = ++counter;
    return v;
  }

  Kind kind() const { return kind_; }
  const Const& constant() const { return c_; }
  const SemVal& first() const { return pair_->first; }
  const SemVal& second() const { return pair_->second; }
  SelComp<M> apply(const SemVal& arg) const {
    if (kind_ != Kind::Fn) throw EvalError("applying a non-function denotation");
    return (*fn_)(arg);
  }

  // Printed form; matches print_value_key on the corresponding syntactic value.
  std::string key() const {
    switch (kind_) {
      case Kind::Base: return print_const(c_);
      case Kind::Unit: return "*";
      case Kind::Pair: return "<" + first().key() + "," + second().key() + ">";
      case Kind::Fn: return "<fun#" + std::to_string(id_) + ">";
    }
    return "?";
  }

  friend bool operator<(const SemVal& a, const SemVal& b) { return compare(a, b) < 0; }
  friend bool operator==(const SemVal& a, const SemVal& b) { return compare(a, b) == 0; }

 private:
  explicit SemVal(Kind k) : kind_(k) {}

  static int compare(const SemVal& a, const SemVal& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    switch (a.kind_) {
      case Kind::Base:
        if (a.c_ < b.c_) return -1;
        if (b.c_ < a.c_) return 1;
        return 0;
      case Kind::Unit: return 0;
      case Kind::Pair: {
        int c = compare(a.first(), b.first());
        return c != 0 ? c : compare(a.second(), b.second());
      }
      case Kind::Fn: return a.id_ < b.id_ ? -1 : (a.id_ == b.id_ ? 0 : 1);
    }
    return 0;
  }

  Kind kind_;
  Const c_;
  std::shared_ptr<const std::pair<SemVal, SemVal>> pair_;
  std::shared_ptr<const FnType> fn_;
  unsigned long id_ = 0;
};

template <class M>
Gamma<M> gamma_of(const RewardTable& table) {
  return [table](const SemVal<M>& v) { return table(v.key()); };
}

template <class M>
Gamma<M> zero_gamma() {
  return [](const SemVal<M>&) { return reward_zero(); };
}

// ------------------------------------------------------------ monad structure

template <class M>
SelComp<M> sel_unit(const SemVal<M>& x) {
  return [x](const Gamma<M>&) { return M::unit(x); };
}

// Queries F at the continuation x -> E(f(x)(gamma) | gamma), then binds the results at gamma.
template <class M>
SelComp<M> sel_bind(SelComp<M> F, std::function<SelComp<M>(const SemVal<M>&)> f) {
  return [F = std::move(F), f = std::move(f)](const Gamma<M>& gamma) {
    std::map<SemVal<M>, TVal<M>> results;
    std::map<SemVal<M>, Reward> scores;
    auto at = [&](const SemVal<M>& x) -> const TVal<M>& {
      auto it = results.find(x);
      if (it == results.end()) it = results.emplace(x, f(x)(gamma)).first;
      return it->second;
    };
    Gamma<M> inner = [&](const SemVal<M>& x) {
      auto it = scores.find(x);
      if (it == scores.end()) it = scores.emplace(x, M::expect(at(x), gamma)).first;
      return it->second;
    };
    TVal<M> u = F(inner);
    return M::bind(u, [&](const SemVal<M>& x) { return at(x); });
  };
}

template <class M>
Reward sel_expect(const SelComp<M>& F, const Gamma<M>& gamma) {
  return M::expect(F(gamma), gamma);
}

template <class M>
SelComp<M> sel_or(SelComp<M> F, SelComp<M> G) {
  return [F = std::move(F), G = std::move(G)](const Gamma<M>& gamma) {
    TVal<M> a = F(gamma);
    TVal<M> b = G(gamma);
    return leq(M::expect(b, gamma), M::expect(a, gamma)) ? a : b;
  };
}

template <class M>
SelComp<M> sel_reward(const Reward& r, SelComp<M> F) {
  return [r, F = std::move(F)](const Gamma<M>& gamma) { return M::reward(r, F(gamma)); };
}

template <class M>
SelComp<M> sel_pchoice(const Rational& p, SelComp<M> F, SelComp<M> G) {
  if constexpr (M::probabilistic) {
    return [p, F = std::move(F), G = std::move(G)](const Gamma<M>& gamma) { return M::pchoice(p, F(gamma), G(gamma)); };
  } else {
    throw EvalError(std::string("probabilistic choice has no meaning in the ") + M::name + " monad");
  }
}

// ------------------------------------------------------------- denotations

template <class M>
struct SemEnv {
  std::string name;
  SemVal<M> value;
  std::shared_ptr<const SemEnv> next;
};

template <class M>
using SemEnvPtr = std::shared_ptr<const SemEnv<M>>;

template <class M>
SemEnvPtr<M> extend(const SemEnvPtr<M>& env, const std::string& x, const SemVal<M>& v) {
  return std::make_shared<const SemEnv<M>>(SemEnv<M>{x, v, env});
}

template <class M>
SelComp<M> denote(const SemEnvPtr<M>& env, const TermPtr& t);

template <class M>
SemVal<M> make_closure(const SemEnvPtr<M>& env, const TermPtr& lam) {
  return SemVal<M>::fn([env, lam](const SemVal<M>& arg) { return denote<M>(extend<M>(env, lam->var, arg), lam->kids[0]); });
}

template <class M>
SemVal<M> denote_pure(const TermPtr& v) {
  switch (v->kind) {
    case TermKind::Const: return SemVal<M>::base(v->constant);
    case TermKind::Star: return SemVal<M>::unit();
    case TermKind::Pair: return SemVal<M>::pair(denote_pure<M>(v->kids[0]), denote_pure<M>(v->kids[1]));
    case TermKind::Lam: return make_closure<M>(nullptr, v);
    default: throw EvalError("pure semantics is only defined on values: " + print_term(v));
  }
}

template <class M>
SelComp<M> denote(const SemEnvPtr<M>& env, const TermPtr& t) {
  using SV = SemVal<M>;
  switch (t->kind) {
    case TermKind::Var:
      for (const SemEnv<M>* e = env.get(); e; e = e->next.get())
        if (e->name == t->var) return sel_unit<M>(e->value);
      throw EvalError("unbound variable '" + t->var + "' in denotation");
    case TermKind::Const: return sel_unit<M>(SV::base(t->constant));
    case TermKind::Star: return sel_unit<M>(SV::unit());
    case TermKind::Lam: return sel_unit<M>(make_closure<M>(env, t));
    case TermKind::Pair: {
      SelComp<M> fa = denote<M>(env, t->kids[0]);
      SelComp<M> fb = denote<M>(env, t->kids[1]);
      return sel_bind<M>(fa, [fb](const SV& a) {
        return sel_bind<M>(fb, [a](const SV& b) { return sel_unit<M>(SV::pair(a, b)); });
      });
    }
    case TermKind::Fst:
    case TermKind::Snd: {
      bool first = t->kind == TermKind::Fst;
      return sel_bind<M>(denote<M>(env, t->kids[0]), [first](const SV& p) {
        if (p.kind() != SV::Kind::Pair) throw EvalError("projection from a non-pair denotation");
        return sel_unit<M>(first ? p.first() : p.second());
      });
    }
    case TermKind::App: {
      SelComp<M> ff = denote<M>(env, t->kids[0]);
      SelComp<M> fa = denote<M>(env, t->kids[1]);
      return sel_bind<M>(ff, [fa](const SV& f) { return sel_bind<M>(fa, [f](const SV& a) { return f.apply(a); }); });
    }
    case TermKind::If: {
      SelComp<M> ft = denote<M>(env, t->kids[1]);
      SelComp<M> fe = denote<M>(env, t->kids[2]);
      return sel_bind<M>(denote<M>(env, t->kids[0]), [ft, fe](const SV& c) {
        if (c.kind() != SV::Kind::Base || c.constant().base != "Bool") throw EvalError("conditional on a non-boolean");
        return c.constant().index == 0 ? ft : fe;
      });
    }
    case TermKind::Fn: {
      SelComp<M> fa = denote<M>(env, t->kids[0]);
      SelComp<M> fb = denote<M>(env, t->kids[1]);
      FnSym sym = t->fn;
      Rational p = t->prob;
      return sel_bind<M>(fa, [fb, sym, p](const SV& a) {
        return sel_bind<M>(fb, [a, sym, p](const SV& b) {
          return sel_unit<M>(SV::base(apply_fn(sym, p, a.constant(), b.constant())));
        });
      });
    }
    case TermKind::Op:
      switch (t->op) {
        case OpSym::Or: return sel_or<M>(denote<M>(env, t->kids[0]), denote<M>(env, t->kids[1]));
        case OpSym::PChoice: return sel_pchoice<M>(t->prob, denote<M>(env, t->kids[0]), denote<M>(env, t->kids[1]));
        case OpSym::Reward: {
          SelComp<M> body = denote<M>(env, t->kids[0]);
          return sel_bind<M>(denote<M>(env, t->params[0]), [body](const SV& r) {
            if (r.kind() != SV::Kind::Base || !r.constant().is_rew()) throw EvalError("reward amount is not a reward");
            return sel_reward<M>(r.constant().value, body);
          });
        }
      }
  }
  throw EvalError("cannot denote term " + print_term(t));
}

template <class M>
SelComp<M> denote_program(const TermPtr& program) {
  if constexpr (std::is_same_v<M, T3Monad>) T3Monad::require_supported();
  return denote<M>(nullptr, program);
}

// The auxiliary-monad image of an operational outcome: sum of p_i (r_i . unit(denote_pure(V_i))).
template <class M>
TVal<M> lift_outcome(const Outcome& o) {
  DWVal<SemVal<M>> mapped = DWMonad::map(o, [](const ValueKey& v) { return denote_pure<M>(v.term); });
  return M::from_dw(mapped);
}

// The observation theta(Op_s(M)), with values kept syntactic.
template <class M>
typename M::template V<ValueKey> observe(const TermPtr& program) {
  if constexpr (std::is_same_v<M, T3Monad>) T3Monad::require_supported();
  return M::from_dw(select_fast(eval_effect(program)));
}

// The program fun (x:b) -> if x == c1 then gamma(c1) . c1 else ...
TermPtr kappa_program(const std::vector<Const>& u, const RewardTable& gamma, const TypePtr& base);

}  // namespace selcalc
