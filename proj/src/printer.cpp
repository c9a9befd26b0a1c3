#include "selcalc/syntax.hpp"

namespace selcalc {

namespace {

constexpr int kLowest = 0;
constexpr int kOr = 1;
constexpr int kChoice = 2;
constexpr int kInfix = 3;
constexpr int kReward = 4;
constexpr int kApp = 5;
constexpr int kAtom = 6;

bool is_let(const TermPtr& t) { return t->kind == TermKind::App && t->kids[0]->kind == TermKind::Lam; }

int level(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::If:
    case TermKind::Lam: return kLowest;
    case TermKind::App: return is_let(t) ? kLowest : kApp;
    case TermKind::Op:
      if (t->op == OpSym::Or) return kOr;
      if (t->op == OpSym::PChoice) return kChoice;
      return kReward;
    case TermKind::Fn: return t->fn == FnSym::Oplus ? kAtom : kInfix;
    case TermKind::Fst:
    case TermKind::Snd: return kApp;
    default: return kAtom;
  }
}

std::string print_at(const TermPtr& t, int ctx);

std::string render(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return t->var;
    case TermKind::Const: return print_const(t->constant);
    case TermKind::Star: return "*";
    case TermKind::Pair: return "<" + print_at(t->kids[0], kLowest) + ", " + print_at(t->kids[1], kLowest) + ">";
    case TermKind::Fst: return "fst " + print_at(t->kids[0], kAtom);
    case TermKind::Snd: return "snd " + print_at(t->kids[0], kAtom);
    case TermKind::If:
      return "if " + print_at(t->kids[0], kLowest) + " then " + print_at(t->kids[1], kLowest) + " else " +
             print_at(t->kids[2], kLowest);
    case TermKind::Lam:
      return "fun (" + t->var + ": " + print_type(t->type) + ") -> " + print_at(t->kids[0], kLowest);
    case TermKind::App:
      if (is_let(t)) {
        const TermPtr& lam = t->kids[0];
        return "let " + lam->var + ": " + print_type(lam->type) + " = " + print_at(t->kids[1], kLowest) + " in " +
               print_at(lam->kids[0], kLowest);
      }
      return print_at(t->kids[0], kApp) + " " + print_at(t->kids[1], kAtom);
    case TermKind::Fn: {
      if (t->fn == FnSym::Oplus)
        return "oplus[" + to_string(t->prob) + "](" + print_at(t->kids[0], kLowest) + ", " +
               print_at(t->kids[1], kLowest) + ")";
      const char* sym = t->fn == FnSym::Add ? " + " : (t->fn == FnSym::Leq ? " <= " : " == ");
      return print_at(t->kids[0], kInfix) + sym + print_at(t->kids[1], kInfix + 1);
    }
    case TermKind::Op:
      switch (t->op) {
        case OpSym::Or: return print_at(t->kids[0], kOr) + " or " + print_at(t->kids[1], kOr + 1);
        case OpSym::PChoice:
          return print_at(t->kids[0], kChoice) + " +[" + to_string(t->prob) + "] " + print_at(t->kids[1], kChoice + 1);
        case OpSym::Reward: return print_at(t->params[0], kApp) + " . " + print_at(t->kids[0], kReward);
      }
  }
  return "?";
}

std::string print_at(const TermPtr& t, int ctx) {
  std::string s = render(t);
  return level(t) < ctx ? "(" + s + ")" : s;
}

}  // namespace

std::string print_term(const TermPtr& t) { return print_at(t, kLowest); }

std::string print_value_key(const TermPtr& v) {
  switch (v->kind) {
    case TermKind::Const: return print_const(v->constant);
    case TermKind::Star: return "*";
    case TermKind::Pair: return "<" + print_value_key(v->kids[0]) + "," + print_value_key(v->kids[1]) + ">";
    default: return print_term(v);
  }
}

}  // namespace selcalc
