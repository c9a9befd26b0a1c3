#pragma once

#include "selcalc/gamma.hpp"
#include "selcalc/monads.hpp"
#include "selcalc/syntax.hpp"

#include <optional>
#include <string>
#include <vector>

namespace selcalc {

// ------------------------------------------------------- rewards calculus

struct CanonEntry {
  Reward reward;
  TermPtr value;
};

bool operator==(const CanonEntry& a, const CanonEntry& b);

// (c1 . V1) or ... or (cn . Vn) with no value repeated; order is significant.
using CanonicalForm = std::vector<CanonEntry>;

// Canonical form of a rewards-only effect value.
CanonicalForm canon_of_effect(const TermPtr& effect);
CanonicalForm canon_rewards(const TermPtr& program);
TermPtr canonical_term(const CanonicalForm& cf);
std::string print_canonical(const CanonicalForm& cf);

bool decide_equiv_rewards(const TermPtr& m, const TermPtr& n);
std::optional<Const> decide_pure_rewards(const TermPtr& program);

// For an impure program: a reward table at which the selected outcome is not the unit of the zero-table value.
RewardTable purity_witness_rewards(const TermPtr& program);

// A term with a single hole occurrence, represented by a variable.
struct Context {
  std::string hole;
  TypePtr hole_type;
  TypePtr result_type;
  TermPtr body;

  TermPtr plug(const TermPtr& t) const;
  std::string print() const;
};

// A context separating two unequal canonical forms over the base type `base`.
Context distinguish_rewards(const CanonicalForm& a, const CanonicalForm& b, const TypePtr& base);

// ------------------------------------------------- probabilistic calculus

enum class ProbMonad { T1, T2, T3 };
const char* prob_monad_name(ProbMonad m);
ProbMonad prob_monad_from_name(const std::string& name);

// A probability/reward combination of constants: sum of p_j (d_j . c_j).
using PRValue = DWVal<ValueKey>;

// The per-monad normal form of a PR value; equality of normal forms is equality in the monad.
struct PRNormal {
  ProbMonad monad = ProbMonad::T1;
  DWVal<ValueKey> t1;
  T2Val<ValueKey> t2;
  T3Val<ValueKey> t3;
};

bool operator==(const PRNormal& a, const PRNormal& b);
inline bool operator!=(const PRNormal& a, const PRNormal& b) { return !(a == b); }

PRNormal normalize_pr(const PRValue& v, ProbMonad m);

// The constant c when the normal form is the unit at c.
std::optional<Const> pure_constant(const PRNormal& n);

// Sum of p_j d_j.
Reward syntactic_expectation(const PRValue& v);

// Expected reward sum of p_j (d_j + gamma(c_j)).
Reward pr_expectation(const PRValue& v, const RewardTable& gamma);

TermPtr pr_term(const PRNormal& n);

struct WeakCanonicalForm {
  ProbMonad monad = ProbMonad::T1;
  std::vector<PRValue> branches;
  std::vector<PRNormal> normals;
};

WeakCanonicalForm weak_canon_of_effect(const TermPtr& effect, ProbMonad m);
WeakCanonicalForm weak_canon_prob(const TermPtr& program, ProbMonad m);
TermPtr weak_canon_term(const WeakCanonicalForm& w);
std::string print_weak_canonical(const WeakCanonicalForm& w);

struct PurityVerdict {
  std::optional<Const> pure;
  // For impure programs: a reward table at which the denotation is not the unit reached at the zero table.
  std::optional<RewardTable> witness;
  std::string reason;
};

PurityVerdict decide_pure_prob(const TermPtr& program, ProbMonad m);

// ------------------------------------------- expectation PR-forms and axioms

struct PRLeaf {
  Rational weight;
  TermPtr amount;  // a Rew constant or variable
  TermPtr body;
};

// Leaves of a term read as an expectation PR-form; a leaf without a reward amount counts as 0 . L.
std::vector<PRLeaf> expectation_leaves(const TermPtr& t);

// The reward term obtained by replacing +[p] with oplus[p] and each leaf d . L with d.
TermPtr expectation_term(const TermPtr& t);

// Whether both terms are in expectation PR-form over the same leaf bodies with equal masses.
bool same_pr_skeleton(const TermPtr& m, const TermPtr& n);

enum class AxiomFamily { Rewards, Prob, RewardsDerived, ProbDerived, T2, T3 };

struct AxiomInfo {
  std::string name;
  AxiomFamily family;
  std::string shape;
};

const std::vector<AxiomInfo>& axiom_catalog();

class NoMatch : public DomainError {
 public:
  using DomainError::DomainError;
};

// Rewrites the subterm at `position` (child indices, params before kids) by the named axiom.
TermPtr apply_axiom(const std::string& name, const TermPtr& m, const std::vector<std::size_t>& position = {});

}  // namespace selcalc
