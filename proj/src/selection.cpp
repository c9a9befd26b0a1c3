#include "selcalc/selection.hpp"

namespace selcalc {

TermPtr kappa_program(const std::vector<Const>& u, const RewardTable& gamma, const TypePtr& base) {
  std::map<Const, TermPtr> h;
  for (const auto& c : u) h[c] = mk_reward(gamma(print_const(c)), mk_const(c));
  return make_dispatcher(u, h, base);
}

}  // namespace selcalc
