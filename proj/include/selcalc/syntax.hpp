#pragma once

#include "selcalc/reward.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace selcalc {

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

enum class Mode { Rewards, Prob };
const char* mode_name(Mode m);

// ---------------------------------------------------------------- types

enum class TypeKind { Base, Unit, Prod, Arrow };

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  TypeKind kind;
  std::string name;
  TypePtr left;
  TypePtr right;
};

TypePtr base_type(const std::string& name);
TypePtr bool_type();
TypePtr rew_type();
TypePtr unit_type();
TypePtr prod_type(TypePtr a, TypePtr b);
TypePtr arrow_type(TypePtr a, TypePtr b);

bool type_equal(const TypePtr& a, const TypePtr& b);
int type_rank(const TypePtr& t);
bool is_base(const TypePtr& t);
std::string print_type(const TypePtr& t);

// ------------------------------------------------------------ constants

// A constant of a base type. Finite bases are identified by declaration index.
struct Const {
  std::string base;
  int index = 0;
  std::string name;
  Rational value;

  bool is_rew() const { return base == "Rew"; }
};

bool operator==(const Const& a, const Const& b);
inline bool operator!=(const Const& a, const Const& b) { return !(a == b); }
bool operator<(const Const& a, const Const& b);

Const tt_const();
Const ff_const();
Const rew_const(const Rational& q);
Const bool_const(bool b);
std::string print_const(const Const& c);

// Carrier element of a constant: 1/0 for tt/ff, the index for user bases, the value for Rew.
Rational carrier_element(const Const& c);

// Declared base types and their constants. Bool = {tt, ff} is always present.
class Signature {
 public:
  Signature();
  void declare(const std::string& base, const std::vector<std::string>& constants);
  bool has_base(const std::string& base) const;
  bool is_finite(const std::string& base) const;
  const std::vector<Const>& carrier(const std::string& base) const;
  std::optional<Const> lookup(const std::string& name) const;
  std::vector<std::string> base_names() const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Const>> bases_;
  std::map<std::string, Const> constants_;
};

// ---------------------------------------------------------------- terms

enum class TermKind { Var, Const, Fn, If, Op, Star, Pair, Fst, Snd, Lam, App };
enum class FnSym { Add, Leq, Eq, Oplus };
enum class OpSym { Or, Reward, PChoice };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  std::string var;
  Const constant;
  FnSym fn = FnSym::Add;
  OpSym op = OpSym::Or;
  Rational prob;
  TypePtr type;
  // Op parameter arguments (the reward amount); empty for every other kind.
  std::vector<TermPtr> params;
  // Remaining immediate subterms in left-to-right order.
  std::vector<TermPtr> kids;

  // params followed by kids: the evaluation order of immediate subterms.
  std::size_t arity() const { return params.size() + kids.size(); }
  const TermPtr& child(std::size_t i) const { return i < params.size() ? params[i] : kids[i - params.size()]; }
};

TermPtr mk_var(const std::string& x);
TermPtr mk_const(const Const& c);
TermPtr mk_tt();
TermPtr mk_ff();
TermPtr mk_rew(const Rational& q);
TermPtr mk_add(TermPtr a, TermPtr b);
TermPtr mk_leq(TermPtr a, TermPtr b);
TermPtr mk_eq(TermPtr a, TermPtr b);
TermPtr mk_oplus(const Rational& p, TermPtr a, TermPtr b);
TermPtr mk_if(TermPtr c, TermPtr t, TermPtr e);
TermPtr mk_or(TermPtr a, TermPtr b);
TermPtr mk_reward(TermPtr amount, TermPtr body);
TermPtr mk_reward(const Rational& amount, TermPtr body);
TermPtr mk_pchoice(const Rational& p, TermPtr a, TermPtr b);
TermPtr mk_star();
TermPtr mk_pair(TermPtr a, TermPtr b);
TermPtr mk_fst(TermPtr e);
TermPtr mk_snd(TermPtr e);
TermPtr mk_lam(const std::string& x, TypePtr t, TermPtr body);
TermPtr mk_app(TermPtr f, TermPtr a);
TermPtr mk_let(const std::string& x, TypePtr t, TermPtr bound, TermPtr body);

// Copy of t with immediate subterm i (in params-then-kids order) replaced.
TermPtr with_child(const TermPtr& t, std::size_t i, TermPtr replacement);

std::size_t term_size(const TermPtr& t);
bool is_value(const TermPtr& t);
bool is_effect_value(const TermPtr& t);
bool is_closed(const TermPtr& t);
std::vector<std::string> free_vars(const TermPtr& t);

// Total order on terms up to renaming of bound variables.
int compare_terms(const TermPtr& a, const TermPtr& b);
inline bool alpha_equal(const TermPtr& a, const TermPtr& b) { return compare_terms(a, b) == 0; }

// Wrapper giving values the structural order used by distributions.
struct ValueKey {
  TermPtr term;
};
inline bool operator<(const ValueKey& a, const ValueKey& b) { return compare_terms(a.term, b.term) < 0; }
inline bool operator==(const ValueKey& a, const ValueKey& b) { return compare_terms(a.term, b.term) == 0; }

std::string print_term(const TermPtr& t);
std::string print_value_key(const TermPtr& v);

// ------------------------------------------------------------- programs

struct Program {
  Signature sig;
  std::optional<Mode> mode;
  TermPtr term;
};

Program parse_program(const std::string& text);
TermPtr parse_term(const std::string& text, const Signature& sig = Signature());
TypePtr parse_type(const std::string& text, const Signature& sig = Signature());

using TypeEnv = std::vector<std::pair<std::string, TypePtr>>;

TypePtr typecheck(const Signature& sig, const TypeEnv& env, const TermPtr& t, Mode mode);
inline TypePtr typecheck(const Signature& sig, const TermPtr& t, Mode mode) { return typecheck(sig, {}, t, mode); }

// Capture-avoiding substitution of replacement for the free occurrences of x.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& replacement);

// Homomorphic replacement of the constant leaves of an effect value of base type.
TermPtr subst_constants(const TermPtr& effect, const std::map<Const, TermPtr>& g);

// fun (x:b) -> if x == c1 then g(c1) else ... else g(cn)
TermPtr make_dispatcher(const std::vector<Const>& u, const std::map<Const, TermPtr>& g, const TypePtr& base);

std::string fresh_name(const std::string& hint);

}  // namespace selcalc
