#pragma once

#include "selcalc/syntax.hpp"

#include <functional>

namespace selcalc {

class EvalError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public EvalError {
 public:
  using EvalError::EvalError;
};

// One frame of an evaluation context: the parent term with a hole at slot.
struct Frame {
  TermPtr parent;
  std::size_t slot;
};

// Outermost frame first.
using EvalContext = std::vector<Frame>;

TermPtr plug(const EvalContext& ctx, TermPtr t);

struct Decomposition {
  bool already_value = false;
  EvalContext context;
  TermPtr redex;
};

Decomposition decompose(const TermPtr& program);

enum class StepKind { AlreadyValue, Ordinary, Branch };

struct StepResult {
  StepKind kind;
  TermPtr term;                   // the value, or the reduct in its context
  OpSym op = OpSym::Or;           // for Branch
  Rational prob;                  // pchoice weight for Branch
  std::vector<Const> params;      // evaluated parameters for Branch
  std::vector<TermPtr> branches;  // E[M_i] for Branch
};

StepResult step(const TermPtr& program);

// Value of a function symbol on constant arguments.
Const apply_fn(FnSym f, const Rational& p, const Const& a, const Const& b);

constexpr std::size_t kDefaultStepBudget = 1000000;

using TraceFn = std::function<void(const TermPtr&)>;

// The effect value Op(M).
TermPtr eval_effect(const TermPtr& program, std::size_t budget = kDefaultStepBudget, const TraceFn& trace = nullptr);

}  // namespace selcalc
