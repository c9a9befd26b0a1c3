#include "selcalc/syntax.hpp"

namespace selcalc {

namespace {

class Checker {
 public:
  Checker(const Signature& sig, Mode mode) : sig_(sig), mode_(mode) {}

  TypePtr check(TypeEnv& env, const TermPtr& t, const std::string& path) {
    switch (t->kind) {
      case TermKind::Var:
        for (std::size_t i = env.size(); i-- > 0;)
          if (env[i].first == t->var) return env[i].second;
        throw TypeError(path + ": unbound variable '" + t->var + "'");
      case TermKind::Const:
        if (t->constant.is_rew()) return rew_type();
        if (!sig_.is_finite(t->constant.base)) throw TypeError(path + ": undeclared base '" + t->constant.base + "'");
        return t->constant.base == "Bool" ? bool_type() : base_type(t->constant.base);
      case TermKind::Star: return unit_type();
      case TermKind::Fn: return check_fn(env, t, path);
      case TermKind::If: {
        expect(check(env, t->kids[0], path + "/if"), bool_type(), path + "/if");
        TypePtr a = check(env, t->kids[1], path + "/then");
        TypePtr b = check(env, t->kids[2], path + "/else");
        expect(b, a, path + "/else");
        return a;
      }
      case TermKind::Op: return check_op(env, t, path);
      case TermKind::Pair:
        return prod_type(check(env, t->kids[0], path + "/pair.1"), check(env, t->kids[1], path + "/pair.2"));
      case TermKind::Fst:
      case TermKind::Snd: {
        TypePtr p = check(env, t->kids[0], path + (t->kind == TermKind::Fst ? "/fst" : "/snd"));
        if (p->kind != TypeKind::Prod) throw TypeError(path + ": projection from non-product type " + print_type(p));
        return t->kind == TermKind::Fst ? p->left : p->right;
      }
      case TermKind::Lam: {
        check_type(t->type, path);
        env.emplace_back(t->var, t->type);
        TypePtr body = check(env, t->kids[0], path + "/fun");
        env.pop_back();
        return arrow_type(t->type, body);
      }
      case TermKind::App: {
        TypePtr f = check(env, t->kids[0], path + "/app.fn");
        TypePtr a = check(env, t->kids[1], path + "/app.arg");
        if (f->kind != TypeKind::Arrow) throw TypeError(path + ": applying a term of non-function type " + print_type(f));
        expect(a, f->left, path + "/app.arg");
        return f->right;
      }
    }
    throw TypeError(path + ": unknown term");
  }

 private:
  const Signature& sig_;
  Mode mode_;

  static void expect(const TypePtr& got, const TypePtr& want, const std::string& path) {
    if (!type_equal(got, want))
      throw TypeError(path + ": expected " + print_type(want) + " but found " + print_type(got));
  }

  void check_type(const TypePtr& t, const std::string& path) const {
    if (t->kind == TypeKind::Base && !sig_.has_base(t->name)) throw TypeError(path + ": unknown base type " + t->name);
    if (t->left) check_type(t->left, path);
    if (t->right) check_type(t->right, path);
  }

  TypePtr check_fn(TypeEnv& env, const TermPtr& t, const std::string& path) {
    TypePtr a = check(env, t->kids[0], path + "/arg1");
    TypePtr b = check(env, t->kids[1], path + "/arg2");
    switch (t->fn) {
      case FnSym::Add:
      case FnSym::Oplus:
        expect(a, rew_type(), path + "/arg1");
        expect(b, rew_type(), path + "/arg2");
        return rew_type();
      case FnSym::Leq:
        expect(a, rew_type(), path + "/arg1");
        expect(b, rew_type(), path + "/arg2");
        return bool_type();
      case FnSym::Eq:
        if (!is_base(a)) throw TypeError(path + ": equality at non-base type " + print_type(a));
        expect(b, a, path + "/arg2");
        return bool_type();
    }
    return a;
  }

  TypePtr check_op(TypeEnv& env, const TermPtr& t, const std::string& path) {
    switch (t->op) {
      case OpSym::Or: {
        TypePtr a = check(env, t->kids[0], path + "/or.1");
        expect(check(env, t->kids[1], path + "/or.2"), a, path + "/or.2");
        return a;
      }
      case OpSym::Reward:
        expect(check(env, t->params[0], path + "/reward.amount"), rew_type(), path + "/reward.amount");
        return check(env, t->kids[0], path + "/reward.body");
      case OpSym::PChoice: {
        if (mode_ != Mode::Prob) throw TypeError(path + ": probabilistic choice is not available in rewards mode");
        TypePtr a = check(env, t->kids[0], path + "/choice.1");
        expect(check(env, t->kids[1], path + "/choice.2"), a, path + "/choice.2");
        return a;
      }
    }
    throw TypeError(path + ": unknown operation");
  }
};

}  // namespace

TypePtr typecheck(const Signature& sig, const TypeEnv& env, const TermPtr& t, Mode mode) {
  TypeEnv local = env;
  return Checker(sig, mode).check(local, t, "term");
}

}  // namespace selcalc
