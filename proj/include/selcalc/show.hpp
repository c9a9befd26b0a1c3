#pragma once

#include "selcalc/monads.hpp"
#include "selcalc/selection.hpp"

#include <string>

namespace selcalc {

// Printed forms of monad values, used in reports and by the command-line tool.

inline std::string show(const ValueKey& v) { return print_value_key(v.term); }
inline std::string show(int x) { return std::to_string(x); }
inline std::string show(bool b) { return b ? "true" : "false"; }
inline std::string show(const Rational& q) { return to_string(q); }

template <class M>
std::string show(const SemVal<M>& v) {
  return v.key();
}

template <class A>
std::string show(const Rewarded<A>& a) {
  return "<" + to_string(a.reward) + ", " + show(a.value) + ">";
}

template <class A>
std::string show(const Dist<A>& d) {
  std::string s;
  for (const auto& [x, p] : d.atoms) {
    if (!s.empty()) s += " + ";
    s += to_string(p) + " " + show(x);
  }
  return s;
}

template <class A>
std::string show(const T2Val<A>& v) {
  std::string rews;
  for (const auto& a : v.atoms) {
    if (!rews.empty()) rews += ", ";
    rews += show(a.value) + " -> " + to_string(a.rew);
  }
  return "<" + show(v.dist()) + ", {" + rews + "}>";
}

template <class A>
std::string show(const T3Val<A>& v) {
  return "<" + show(v.dist) + ", " + to_string(v.rew) + ">";
}

template <class A>
std::string show(const MRVal<A>& v) {
  std::string s;
  for (const auto& [x, r] : v.entries) {
    if (!s.empty()) s += ", ";
    s += show(x) + " -> " + to_string(r);
  }
  return "{" + s + "}";
}

}  // namespace selcalc
