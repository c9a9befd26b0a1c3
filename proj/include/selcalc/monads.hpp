#pragma once

#include "selcalc/reward.hpp"
#include "selcalc/syntax.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

namespace selcalc {

// ------------------------------------------------------------ distributions

// Finite distribution: atoms sorted by value, positive probabilities summing to 1.
template <class A>
struct Dist {
  std::vector<std::pair<A, Rational>> atoms;

  std::size_t size() const { return atoms.size(); }
  Rational prob(const A& x) const {
    for (const auto& [y, p] : atoms)
      if (y == x) return p;
    return Rational(0);
  }
};

template <class A>
bool operator==(const Dist<A>& a, const Dist<A>& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    if (!(a.atoms[i].first == b.atoms[i].first) || a.atoms[i].second != b.atoms[i].second) return false;
  return true;
}

template <class A>
bool operator<(const Dist<A>& a, const Dist<A>& b) {
  return std::lexicographical_compare(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                                      [](const auto& x, const auto& y) {
                                        if (x.first < y.first) return true;
                                        if (y.first < x.first) return false;
                                        return x.second < y.second;
                                      });
}

// Merges duplicates, drops zero weights, sorts, and checks that the mass is exactly 1.
template <class A>
Dist<A> make_dist(const std::vector<std::pair<A, Rational>>& items) {
  std::map<A, Rational> acc;
  for (const auto& [x, p] : items) {
    if (p < 0) throw DomainError("negative probability " + to_string(p));
    if (p == 0) continue;
    auto it = acc.find(x);
    if (it == acc.end())
      acc.emplace(x, p);
    else
      it->second += p;
  }
  Dist<A> d;
  Rational total = 0;
  for (auto& [x, p] : acc) {
    total += p;
    d.atoms.emplace_back(x, p);
  }
  if (total != 1) throw DomainError("distribution mass is " + to_string(total) + ", not 1");
  return d;
}

template <class A>
Dist<A> dirac(const A& x) {
  Dist<A> d;
  d.atoms.emplace_back(x, Rational(1));
  return d;
}

template <class A>
Dist<A> mix(const Rational& p, const Dist<A>& u, const Dist<A>& v) {
  require_probability(p);
  if (p == 1) return u;
  if (p == 0) return v;
  std::vector<std::pair<A, Rational>> items;
  for (const auto& [x, q] : u.atoms) items.emplace_back(x, p * q);
  for (const auto& [x, q] : v.atoms) items.emplace_back(x, (1 - p) * q);
  return make_dist(items);
}

template <class A, class F>
auto map_dist(const Dist<A>& d, F f) {
  using B = std::decay_t<std::invoke_result_t<F, const A&>>;
  std::vector<std::pair<B, Rational>> items;
  for (const auto& [x, p] : d.atoms) items.emplace_back(f(x), p);
  return make_dist(items);
}

// Weighted sum of rewards with weights summing to 1, the iterated convex combination.
inline Reward weighted_sum(const std::vector<std::pair<Rational, Reward>>& terms) {
  Reward acc = 0;
  for (const auto& [p, r] : terms) acc += p * r;
  acc.canonicalize();
  return acc;
}

// --------------------------------------------------------------- carriers

template <class A>
struct Rewarded {
  Reward reward;
  A value;
};

template <class A>
bool operator==(const Rewarded<A>& a, const Rewarded<A>& b) {
  return a.reward == b.reward && a.value == b.value;
}

template <class A>
bool operator<(const Rewarded<A>& a, const Rewarded<A>& b) {
  if (a.reward != b.reward) return a.reward < b.reward;
  return a.value < b.value;
}

template <class A>
using WVal = Rewarded<A>;

template <class A>
using DWVal = Dist<Rewarded<A>>;

template <class A>
struct T2Atom {
  A value;
  Rational prob;
  Reward rew;
};

// Value distribution with a reward for every support point, sorted by value.
template <class A>
struct T2Val {
  std::vector<T2Atom<A>> atoms;

  Dist<A> dist() const {
    Dist<A> d;
    for (const auto& a : atoms) d.atoms.emplace_back(a.value, a.prob);
    return d;
  }
  Reward rew(const A& x) const {
    for (const auto& a : atoms)
      if (a.value == x) return a.rew;
    throw DomainError("value outside the support of a T2 value");
  }
};

template <class A>
bool operator==(const T2Val<A>& a, const T2Val<A>& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    const auto &x = a.atoms[i], &y = b.atoms[i];
    if (!(x.value == y.value) || x.prob != y.prob || x.rew != y.rew) return false;
  }
  return true;
}

template <class A>
bool operator<(const T2Val<A>& a, const T2Val<A>& b) {
  return std::lexicographical_compare(a.atoms.begin(), a.atoms.end(), b.atoms.begin(), b.atoms.end(),
                                      [](const T2Atom<A>& x, const T2Atom<A>& y) {
                                        if (x.value < y.value) return true;
                                        if (y.value < x.value) return false;
                                        if (x.prob != y.prob) return x.prob < y.prob;
                                        return x.rew < y.rew;
                                      });
}

template <class A>
struct T3Val {
  Dist<A> dist;
  Reward rew;
};

template <class A>
bool operator==(const T3Val<A>& a, const T3Val<A>& b) {
  return a.rew == b.rew && a.dist == b.dist;
}

template <class A>
bool operator<(const T3Val<A>& a, const T3Val<A>& b) {
  if (a.dist < b.dist) return true;
  if (b.dist < a.dist) return false;
  return a.rew < b.rew;
}

// Nonempty finite map from values to rewards, sorted by value.
template <class A>
struct MRVal {
  std::vector<std::pair<A, Reward>> entries;
};

template <class A>
bool operator==(const MRVal<A>& a, const MRVal<A>& b) {
  if (a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (!(a.entries[i].first == b.entries[i].first) || a.entries[i].second != b.entries[i].second) return false;
  return true;
}

// ----------------------------------------------------------------- monads

template <class F, class A>
using bind_result_t = std::decay_t<std::invoke_result_t<F, const A&>>;

struct WMonad {
  static constexpr const char* name = "W";
  static constexpr bool probabilistic = false;
  template <class A>
  using V = WVal<A>;

  template <class A>
  static V<A> unit(const A& x) {
    return {reward_zero(), x};
  }

  template <class A, class F>
  static auto bind(const V<A>& u, F&& f) {
    auto v = f(u.value);
    return decltype(v){add(u.reward, v.reward), v.value};
  }

  template <class A>
  static V<A> reward(const Reward& r, const V<A>& u) {
    return {add(r, u.reward), u.value};
  }

  template <class A, class F>
  static auto map(const V<A>& u, F&& f) {
    using B = bind_result_t<F, A>;
    return V<B>{u.reward, f(u.value)};
  }

  static Reward alpha(const V<Reward>& u) { return add(u.reward, u.value); }

  template <class A, class G>
  static Reward expect(const V<A>& u, G&& gamma) {
    return alpha(map(u, gamma));
  }

  template <class A>
  static V<A> from_dw(const DWVal<A>& u) {
    if (u.atoms.size() != 1) throw DomainError("a probabilistic outcome has no writer-monad image");
    return u.atoms[0].first;
  }
};

struct DWMonad {
  static constexpr const char* name = "DW";
  static constexpr bool probabilistic = true;
  template <class A>
  using V = DWVal<A>;

  template <class A>
  static V<A> unit(const A& x) {
    return dirac(Rewarded<A>{reward_zero(), x});
  }

  template <class A, class F>
  static auto bind(const V<A>& u, F&& f) {
    using R = bind_result_t<F, A>;
    using B = decltype(R{}.atoms[0].first.value);
    std::vector<std::pair<Rewarded<B>, Rational>> items;
    for (const auto& [rx, p] : u.atoms) {
      R v = f(rx.value);
      for (const auto& [sy, q] : v.atoms) items.emplace_back(Rewarded<B>{add(rx.reward, sy.reward), sy.value}, p * q);
    }
    return make_dist(items);
  }

  template <class A>
  static V<A> reward(const Reward& r, const V<A>& u) {
    return map_dist(u, [&](const Rewarded<A>& a) { return Rewarded<A>{add(r, a.reward), a.value}; });
  }

  template <class A>
  static V<A> pchoice(const Rational& p, const V<A>& u, const V<A>& v) {
    return mix(p, u, v);
  }

  template <class A, class F>
  static auto map(const V<A>& u, F&& f) {
    using B = bind_result_t<F, A>;
    return map_dist(u, [&](const Rewarded<A>& a) { return Rewarded<B>{a.reward, f(a.value)}; });
  }

  static Reward alpha(const V<Reward>& u) {
    std::vector<std::pair<Rational, Reward>> terms;
    for (const auto& [a, p] : u.atoms) terms.emplace_back(p, add(a.reward, a.value));
    return weighted_sum(terms);
  }

  template <class A, class G>
  static Reward expect(const V<A>& u, G&& gamma) {
    return alpha(map(u, gamma));
  }

  template <class A>
  static V<A> from_dw(const DWVal<A>& u) {
    return u;
  }
};

struct T2Monad {
  static constexpr const char* name = "T2";
  static constexpr bool probabilistic = true;
  template <class A>
  using V = T2Val<A>;

  template <class A>
  static V<A> unit(const A& x) {
    return V<A>{{T2Atom<A>{x, Rational(1), reward_zero()}}};
  }

  // Convex combination of T2 values; the weights must sum to 1.
  template <class A>
  static V<A> sum(const std::vector<std::pair<Rational, V<A>>>& parts) {
    std::map<A, std::pair<Rational, Rational>> acc;  // mass, mass-weighted reward
    Rational total = 0;
    for (const auto& [w, v] : parts) {
      if (w < 0) throw DomainError("negative weight in T2 combination");
      if (w == 0) continue;
      total += w;
      for (const auto& a : v.atoms) {
        auto& slot = acc[a.value];
        slot.first += w * a.prob;
        slot.second += w * a.prob * a.rew;
      }
    }
    if (total != 1) throw DomainError("T2 combination weights sum to " + to_string(total));
    V<A> out;
    for (auto& [x, mr] : acc) {
      Reward r = mr.second / mr.first;
      r.canonicalize();
      out.atoms.push_back({x, mr.first, r});
    }
    return out;
  }

  template <class A, class F>
  static auto bind(const V<A>& u, F&& f) {
    using R = bind_result_t<F, A>;
    std::vector<std::pair<Rational, R>> parts;
    for (const auto& a : u.atoms) parts.emplace_back(a.prob, reward(a.rew, f(a.value)));
    return sum(parts);
  }

  template <class A>
  static V<A> reward(const Reward& r, const V<A>& u) {
    V<A> out = u;
    for (auto& a : out.atoms) a.rew = add(r, a.rew);
    return out;
  }

  template <class A>
  static V<A> pchoice(const Rational& p, const V<A>& u, const V<A>& v) {
    require_probability(p);
    if (p == 1) return u;
    if (p == 0) return v;
    return sum<A>({{p, u}, {1 - p, v}});
  }

  template <class A, class F>
  static auto map(const V<A>& u, F&& f) {
    using B = bind_result_t<F, A>;
    std::vector<std::pair<Rational, V<B>>> parts;
    for (const auto& a : u.atoms) parts.emplace_back(a.prob, V<B>{{T2Atom<B>{f(a.value), Rational(1), a.rew}}});
    return sum(parts);
  }

  static Reward alpha(const V<Reward>& u) {
    std::vector<std::pair<Rational, Reward>> terms;
    for (const auto& a : u.atoms) terms.emplace_back(a.prob, add(a.rew, a.value));
    return weighted_sum(terms);
  }

  template <class A, class G>
  static Reward expect(const V<A>& u, G&& gamma) {
    return alpha(map(u, gamma));
  }

  template <class A>
  static V<A> from_dw(const DWVal<A>& u) {
    std::vector<std::pair<Rational, V<A>>> parts;
    for (const auto& [a, p] : u.atoms) parts.emplace_back(p, reward(a.reward, unit(a.value)));
    return sum(parts);
  }
};

struct T3Monad {
  static constexpr const char* name = "T3";
  static constexpr bool probabilistic = true;
  template <class A>
  using V = T3Val<A>;

  static void require_supported() {
    if (!structure_supports_t3())
      throw DomainError(std::string("the T3 monad needs the gather law, which fails for reward structure ") +
                        structure_name(active_structure()));
  }

  template <class A>
  static V<A> unit(const A& x) {
    return {dirac(x), reward_zero()};
  }

  template <class A>
  static V<A> sum(const std::vector<std::pair<Rational, V<A>>>& parts) {
    std::vector<std::pair<A, Rational>> items;
    std::vector<std::pair<Rational, Reward>> rews;
    for (const auto& [w, v] : parts) {
      if (w == 0) continue;
      for (const auto& [x, p] : v.dist.atoms) items.emplace_back(x, w * p);
      rews.emplace_back(w, v.rew);
    }
    return {make_dist(items), weighted_sum(rews)};
  }

  template <class A, class F>
  static auto bind(const V<A>& u, F&& f) {
    using R = bind_result_t<F, A>;
    std::vector<std::pair<Rational, R>> parts;
    for (const auto& [x, p] : u.dist.atoms) parts.emplace_back(p, f(x));
    return reward(u.rew, sum(parts));
  }

  template <class A>
  static V<A> reward(const Reward& r, const V<A>& u) {
    return {u.dist, add(r, u.rew)};
  }

  template <class A>
  static V<A> pchoice(const Rational& p, const V<A>& u, const V<A>& v) {
    require_probability(p);
    if (p == 1) return u;
    if (p == 0) return v;
    return {mix(p, u.dist, v.dist), convex(p, u.rew, v.rew)};
  }

  template <class A, class F>
  static auto map(const V<A>& u, F&& f) {
    using B = bind_result_t<F, A>;
    return V<B>{map_dist(u.dist, f), u.rew};
  }

  static Reward alpha(const V<Reward>& u) {
    require_supported();
    std::vector<std::pair<Rational, Reward>> terms;
    for (const auto& [x, p] : u.dist.atoms) terms.emplace_back(p, x);
    return add(u.rew, weighted_sum(terms));
  }

  template <class A, class G>
  static Reward expect(const V<A>& u, G&& gamma) {
    return alpha(map(u, gamma));
  }

  template <class A>
  static V<A> from_dw(const DWVal<A>& u) {
    std::vector<std::pair<Rational, V<A>>> parts;
    for (const auto& [a, p] : u.atoms) parts.emplace_back(p, reward(a.reward, unit(a.value)));
    return sum(parts);
  }
};

struct MRMonad {
  static constexpr const char* name = "MR";
  static constexpr bool probabilistic = false;
  template <class A>
  using V = MRVal<A>;

  template <class A>
  static V<A> unit(const A& x) {
    return V<A>{{{x, reward_zero()}}};
  }

  template <class A>
  static V<A> join_max(const std::vector<std::pair<A, Reward>>& items) {
    if (items.empty()) throw DomainError("empty reward map");
    std::map<A, Reward> acc;
    for (const auto& [x, r] : items) {
      auto it = acc.find(x);
      if (it == acc.end())
        acc.emplace(x, r);
      else if (less(it->second, r))
        it->second = r;
    }
    return V<A>{{acc.begin(), acc.end()}};
  }

  template <class A>
  static V<A> choice(const V<A>& u, const V<A>& v) {
    std::vector<std::pair<A, Reward>> items = u.entries;
    items.insert(items.end(), v.entries.begin(), v.entries.end());
    return join_max(items);
  }

  template <class A>
  static V<A> reward(const Reward& r, const V<A>& u) {
    V<A> out = u;
    for (auto& e : out.entries) e.second = add(r, e.second);
    return out;
  }

  template <class A, class F>
  static auto bind(const V<A>& u, F&& f) {
    using R = bind_result_t<F, A>;
    using B = decltype(R{}.entries[0].first);
    std::vector<std::pair<B, Reward>> items;
    for (const auto& [x, r] : u.entries) {
      R v = reward(r, f(x));
      items.insert(items.end(), v.entries.begin(), v.entries.end());
    }
    return join_max(items);
  }

  template <class A, class F>
  static auto map(const V<A>& u, F&& f) {
    using B = bind_result_t<F, A>;
    std::vector<std::pair<B, Reward>> items;
    for (const auto& [x, r] : u.entries) items.emplace_back(f(x), r);
    return join_max(items);
  }
};

// ------------------------------------------------ observations on DW values

template <class A>
Dist<A> vdis(const DWVal<A>& u) {
  return map_dist(u, [](const Rewarded<A>& a) { return a.value; });
}

template <class A>
Reward cond_reward(const DWVal<A>& u, const A& x) {
  Rational mass = 0;
  Reward acc = 0;
  for (const auto& [a, p] : u.atoms) {
    if (!(a.value == x)) continue;
    mass += p;
    acc += p * a.reward;
  }
  if (mass == 0) throw DomainError("conditional reward requested outside the value support");
  Reward r = acc / mass;
  r.canonicalize();
  return r;
}

template <class A>
Reward expect0(const DWVal<A>& u) {
  std::vector<std::pair<Rational, Reward>> terms;
  for (const auto& [a, p] : u.atoms) terms.emplace_back(p, a.reward);
  return weighted_sum(terms);
}

template <class T, class A>
typename T::template V<A> theta(const DWVal<A>& u) {
  return T::from_dw(u);
}

// Reward addition: bind(u, x -> gamma(x) . unit(x)).
template <class T, class A, class G>
typename T::template V<A> k_gamma(G&& gamma, const typename T::template V<A>& u) {
  return T::bind(u, [&](const A& x) { return T::reward(gamma(x), T::template unit<A>(x)); });
}

// Denotation of a rewards-only effect value of base type in the max-plus monad.
MRVal<ValueKey> mr_of_effect(const TermPtr& effect);

}  // namespace selcalc
