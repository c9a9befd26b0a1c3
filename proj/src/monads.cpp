#include "selcalc/monads.hpp"

namespace selcalc {

MRVal<ValueKey> mr_of_effect(const TermPtr& e) {
  if (is_value(e)) return MRMonad::unit(ValueKey{e});
  if (e->kind != TermKind::Op) throw DomainError("max-plus denotation needs an effect value");
  switch (e->op) {
    case OpSym::Or: return MRMonad::choice(mr_of_effect(e->kids[0]), mr_of_effect(e->kids[1]));
    case OpSym::Reward: return MRMonad::reward(e->params[0]->constant.value, mr_of_effect(e->kids[0]));
    case OpSym::PChoice: break;
  }
  throw DomainError("max-plus denotation is undefined on probabilistic choice");
}

}  // namespace selcalc
