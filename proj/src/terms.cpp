#include "selcalc/syntax.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace selcalc {

const char* mode_name(Mode m) { return m == Mode::Rewards ? "rewards" : "prob"; }

// ---------------------------------------------------------------- types

TypePtr base_type(const std::string& name) { return std::make_shared<Type>(Type{TypeKind::Base, name, nullptr, nullptr}); }

TypePtr bool_type() {
  static const TypePtr t = base_type("Bool");
  return t;
}

TypePtr rew_type() {
  static const TypePtr t = base_type("Rew");
  return t;
}

TypePtr unit_type() {
  static const TypePtr t = std::make_shared<Type>(Type{TypeKind::Unit, "", nullptr, nullptr});
  return t;
}

TypePtr prod_type(TypePtr a, TypePtr b) { return std::make_shared<Type>(Type{TypeKind::Prod, "", a, b}); }
TypePtr arrow_type(TypePtr a, TypePtr b) { return std::make_shared<Type>(Type{TypeKind::Arrow, "", a, b}); }

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Base: return a->name == b->name;
    case TypeKind::Unit: return true;
    default: return type_equal(a->left, b->left) && type_equal(a->right, b->right);
  }
}

int type_rank(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base:
    case TypeKind::Unit: return 0;
    case TypeKind::Prod: return std::max(type_rank(t->left), type_rank(t->right));
    case TypeKind::Arrow: return std::max(type_rank(t->left) + 1, type_rank(t->right));
  }
  return 0;
}

bool is_base(const TypePtr& t) { return t->kind == TypeKind::Base; }

std::string print_type(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Base: return t->name;
    case TypeKind::Unit: return "Unit";
    case TypeKind::Prod: {
      auto side = [](const TypePtr& s) {
        return s->kind == TypeKind::Arrow || s->kind == TypeKind::Prod ? "(" + print_type(s) + ")" : print_type(s);
      };
      return side(t->left) + " * " + side(t->right);
    }
    case TypeKind::Arrow: {
      std::string l = print_type(t->left);
      if (t->left->kind == TypeKind::Arrow) l = "(" + l + ")";
      return l + " -> " + print_type(t->right);
    }
  }
  return "?";
}

// ------------------------------------------------------------ constants

bool operator==(const Const& a, const Const& b) {
  if (a.base != b.base) return false;
  return a.is_rew() ? a.value == b.value : a.index == b.index;
}

bool operator<(const Const& a, const Const& b) {
  if (a.base != b.base) return a.base < b.base;
  return a.is_rew() ? a.value < b.value : a.index < b.index;
}

Const tt_const() { return Const{"Bool", 0, "tt", Rational(0)}; }
Const ff_const() { return Const{"Bool", 1, "ff", Rational(0)}; }
Const bool_const(bool b) { return b ? tt_const() : ff_const(); }
Const rew_const(const Rational& q) { return Const{"Rew", 0, "", q}; }

std::string print_const(const Const& c) { return c.is_rew() ? to_string(c.value) : c.name; }

Rational carrier_element(const Const& c) {
  if (c.is_rew()) return c.value;
  if (c.base == "Bool") return c.index == 0 ? Rational(1) : Rational(0);
  return Rational(c.index);
}

Signature::Signature() {
  order_.push_back("Bool");
  bases_["Bool"] = {tt_const(), ff_const()};
  constants_["tt"] = tt_const();
  constants_["ff"] = ff_const();
}

void Signature::declare(const std::string& base, const std::vector<std::string>& constants) {
  if (base == "Rew" || base == "Unit" || bases_.count(base)) throw TypeError("base type '" + base + "' already declared");
  if (constants.empty()) throw TypeError("base type '" + base + "' needs at least one constant");
  std::vector<Const> cs;
  for (std::size_t i = 0; i < constants.size(); ++i) {
    if (constants_.count(constants[i])) throw TypeError("constant '" + constants[i] + "' already declared");
    Const c{base, static_cast<int>(i), constants[i], Rational(0)};
    constants_[constants[i]] = c;
    cs.push_back(c);
  }
  order_.push_back(base);
  bases_[base] = std::move(cs);
}

bool Signature::has_base(const std::string& base) const { return base == "Rew" || bases_.count(base) > 0; }
bool Signature::is_finite(const std::string& base) const { return bases_.count(base) > 0; }

const std::vector<Const>& Signature::carrier(const std::string& base) const {
  auto it = bases_.find(base);
  if (it == bases_.end()) throw DomainError("base type '" + base + "' has no finite carrier");
  return it->second;
}

std::optional<Const> Signature::lookup(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> Signature::base_names() const { return order_; }

// ---------------------------------------------------------------- terms

namespace {

TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

Term blank(TermKind k) {
  Term t;
  t.kind = k;
  return t;
}

TermPtr fn2(FnSym f, TermPtr a, TermPtr b) {
  Term t = blank(TermKind::Fn);
  t.fn = f;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

}  // namespace

TermPtr mk_var(const std::string& x) {
  Term t = blank(TermKind::Var);
  t.var = x;
  return make(std::move(t));
}

TermPtr mk_const(const Const& c) {
  Term t = blank(TermKind::Const);
  t.constant = c;
  return make(std::move(t));
}

TermPtr mk_tt() { return mk_const(tt_const()); }
TermPtr mk_ff() { return mk_const(ff_const()); }
TermPtr mk_rew(const Rational& q) { return mk_const(rew_const(q)); }
TermPtr mk_add(TermPtr a, TermPtr b) { return fn2(FnSym::Add, std::move(a), std::move(b)); }
TermPtr mk_leq(TermPtr a, TermPtr b) { return fn2(FnSym::Leq, std::move(a), std::move(b)); }
TermPtr mk_eq(TermPtr a, TermPtr b) { return fn2(FnSym::Eq, std::move(a), std::move(b)); }

TermPtr mk_oplus(const Rational& p, TermPtr a, TermPtr b) {
  require_probability(p);
  Term t = blank(TermKind::Fn);
  t.fn = FnSym::Oplus;
  t.prob = p;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr mk_if(TermPtr c, TermPtr th, TermPtr el) {
  Term t = blank(TermKind::If);
  t.kids = {std::move(c), std::move(th), std::move(el)};
  return make(std::move(t));
}

TermPtr mk_or(TermPtr a, TermPtr b) {
  Term t = blank(TermKind::Op);
  t.op = OpSym::Or;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr mk_reward(TermPtr amount, TermPtr body) {
  Term t = blank(TermKind::Op);
  t.op = OpSym::Reward;
  t.params = {std::move(amount)};
  t.kids = {std::move(body)};
  return make(std::move(t));
}

TermPtr mk_reward(const Rational& amount, TermPtr body) { return mk_reward(mk_rew(amount), std::move(body)); }

TermPtr mk_pchoice(const Rational& p, TermPtr a, TermPtr b) {
  require_probability(p);
  Term t = blank(TermKind::Op);
  t.op = OpSym::PChoice;
  t.prob = p;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr mk_star() {
  static const TermPtr s = make(blank(TermKind::Star));
  return s;
}

TermPtr mk_pair(TermPtr a, TermPtr b) {
  Term t = blank(TermKind::Pair);
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

TermPtr mk_fst(TermPtr e) {
  Term t = blank(TermKind::Fst);
  t.kids = {std::move(e)};
  return make(std::move(t));
}

TermPtr mk_snd(TermPtr e) {
  Term t = blank(TermKind::Snd);
  t.kids = {std::move(e)};
  return make(std::move(t));
}

TermPtr mk_lam(const std::string& x, TypePtr ty, TermPtr body) {
  Term t = blank(TermKind::Lam);
  t.var = x;
  t.type = std::move(ty);
  t.kids = {std::move(body)};
  return make(std::move(t));
}

TermPtr mk_app(TermPtr f, TermPtr a) {
  Term t = blank(TermKind::App);
  t.kids = {std::move(f), std::move(a)};
  return make(std::move(t));
}

TermPtr mk_let(const std::string& x, TypePtr ty, TermPtr bound, TermPtr body) {
  return mk_app(mk_lam(x, std::move(ty), std::move(body)), std::move(bound));
}

TermPtr with_child(const TermPtr& t, std::size_t i, TermPtr replacement) {
  Term copy = *t;
  if (i < copy.params.size())
    copy.params[i] = std::move(replacement);
  else
    copy.kids.at(i - copy.params.size()) = std::move(replacement);
  return make(std::move(copy));
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < t->arity(); ++i) n += term_size(t->child(i));
  return n;
}

bool is_value(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Const:
    case TermKind::Star:
    case TermKind::Lam: return true;
    case TermKind::Pair: return is_value(t->kids[0]) && is_value(t->kids[1]);
    default: return false;
  }
}

bool is_effect_value(const TermPtr& t) {
  if (is_value(t)) return true;
  if (t->kind != TermKind::Op) return false;
  for (const auto& p : t->params)
    if (p->kind != TermKind::Const) return false;
  for (const auto& k : t->kids)
    if (!is_effect_value(k)) return false;
  return true;
}

namespace {

void collect_free(const TermPtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  if (t->kind == TermKind::Var) {
    if (std::find(bound.begin(), bound.end(), t->var) == bound.end()) out.insert(t->var);
    return;
  }
  if (t->kind == TermKind::Lam) {
    bound.push_back(t->var);
    collect_free(t->kids[0], bound, out);
    bound.pop_back();
    return;
  }
  for (std::size_t i = 0; i < t->arity(); ++i) collect_free(t->child(i), bound, out);
}

bool occurs_free(const TermPtr& t, const std::string& x) {
  if (t->kind == TermKind::Var) return t->var == x;
  if (t->kind == TermKind::Lam) return t->var != x && occurs_free(t->kids[0], x);
  for (std::size_t i = 0; i < t->arity(); ++i)
    if (occurs_free(t->child(i), x)) return true;
  return false;
}

}  // namespace

std::vector<std::string> free_vars(const TermPtr& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(t, bound, out);
  return {out.begin(), out.end()};
}

bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

namespace {

int cmp_rational(const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); }

int cmp_types(const TypePtr& a, const TypePtr& b) {
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case TypeKind::Base: return a->name.compare(b->name) < 0 ? -1 : (a->name == b->name ? 0 : 1);
    case TypeKind::Unit: return 0;
    default: {
      int c = cmp_types(a->left, b->left);
      return c != 0 ? c : cmp_types(a->right, b->right);
    }
  }
}

int binder_index(const std::vector<std::string>& env, const std::string& x) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == x) return static_cast<int>(env.size() - 1 - i);
  return -1;
}

int cmp_terms(const TermPtr& a, std::vector<std::string>& ea, const TermPtr& b, std::vector<std::string>& eb) {
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  switch (a->kind) {
    case TermKind::Var: {
      int ia = binder_index(ea, a->var), ib = binder_index(eb, b->var);
      if (ia != ib) return ia < ib ? -1 : 1;
      if (ia >= 0) return 0;
      return a->var < b->var ? -1 : (a->var == b->var ? 0 : 1);
    }
    case TermKind::Const:
      if (a->constant < b->constant) return -1;
      if (b->constant < a->constant) return 1;
      return 0;
    case TermKind::Lam: {
      int c = cmp_types(a->type, b->type);
      if (c != 0) return c;
      ea.push_back(a->var);
      eb.push_back(b->var);
      c = cmp_terms(a->kids[0], ea, b->kids[0], eb);
      ea.pop_back();
      eb.pop_back();
      return c;
    }
    case TermKind::Fn:
      if (a->fn != b->fn) return a->fn < b->fn ? -1 : 1;
      if (int c = cmp_rational(a->prob, b->prob); c != 0) return c;
      break;
    case TermKind::Op:
      if (a->op != b->op) return a->op < b->op ? -1 : 1;
      if (int c = cmp_rational(a->prob, b->prob); c != 0) return c;
      break;
    default: break;
  }
  if (a->arity() != b->arity()) return a->arity() < b->arity() ? -1 : 1;
  for (std::size_t i = 0; i < a->arity(); ++i)
    if (int c = cmp_terms(a->child(i), ea, b->child(i), eb); c != 0) return c;
  return 0;
}

std::atomic<unsigned long> g_fresh{0};

}  // namespace

int compare_terms(const TermPtr& a, const TermPtr& b) {
  std::vector<std::string> ea, eb;
  return cmp_terms(a, ea, b, eb);
}

std::string fresh_name(const std::string& hint) {
  std::string stem = hint;
  auto us = stem.find("_");
  if (us != std::string::npos) stem = stem.substr(0, us);
  if (stem.empty()) stem = "v";
  return stem + "_" + std::to_string(++g_fresh);
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& replacement) {
  switch (t->kind) {
    case TermKind::Var: return t->var == x ? replacement : t;
    case TermKind::Const:
    case TermKind::Star: return t;
    case TermKind::Lam: {
      if (t->var == x || !occurs_free(t->kids[0], x)) return t;
      if (occurs_free(replacement, t->var)) {
        std::string y = fresh_name(t->var);
        TermPtr body = substitute(t->kids[0], t->var, mk_var(y));
        return mk_lam(y, t->type, substitute(body, x, replacement));
      }
      return mk_lam(t->var, t->type, substitute(t->kids[0], x, replacement));
    }
    default: {
      TermPtr out = t;
      for (std::size_t i = 0; i < t->arity(); ++i) {
        TermPtr c = substitute(t->child(i), x, replacement);
        if (c != t->child(i)) out = with_child(out, i, c);
      }
      return out;
    }
  }
}

TermPtr subst_constants(const TermPtr& e, const std::map<Const, TermPtr>& g) {
  if (e->kind == TermKind::Const) {
    auto it = g.find(e->constant);
    if (it == g.end()) throw DomainError("constant map has no entry for '" + print_const(e->constant) + "'");
    return it->second;
  }
  if (e->kind != TermKind::Op) throw DomainError("constant substitution needs an effect value of base type");
  TermPtr out = e;
  for (std::size_t i = 0; i < e->kids.size(); ++i)
    out = with_child(out, e->params.size() + i, subst_constants(e->kids[i], g));
  return out;
}

TermPtr make_dispatcher(const std::vector<Const>& u, const std::map<Const, TermPtr>& g, const TypePtr& base) {
  if (u.empty()) throw DomainError("dispatcher needs a nonempty constant list");
  auto lookup = [&](const Const& c) {
    auto it = g.find(c);
    if (it == g.end()) throw DomainError("constant map has no entry for '" + print_const(c) + "'");
    return it->second;
  };
  const std::string x = "x";
  TermPtr body = lookup(u.back());
  for (std::size_t i = u.size() - 1; i-- > 0;) body = mk_if(mk_eq(mk_var(x), mk_const(u[i])), lookup(u[i]), body);
  return mk_lam(x, base, body);
}

}  // namespace selcalc
