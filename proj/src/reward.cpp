#include "selcalc/reward.hpp"

#include <array>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <random>

namespace selcalc {

namespace {

std::atomic<Structure> g_structure{Structure::AddRationals};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) throw Error("malformed rational literal '" + std::string(text) + "'");
  mpz_class n{std::string(num)};
  mpz_class d{std::string(den)};
  if (d == 0) throw Error("zero denominator in rational literal '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

const char* structure_name(Structure s) {
  switch (s) {
    case Structure::AddRationals: return "add";
    case Structure::NonNegAdd: return "nonneg-add";
    case Structure::MulPositiveRationals: return "mul-positive";
  }
  return "?";
}

Structure structure_from_name(std::string_view name) {
  for (Structure s : {Structure::AddRationals, Structure::NonNegAdd, Structure::MulPositiveRationals})
    if (name == structure_name(s)) return s;
  throw Error("unknown reward structure '" + std::string(name) + "'");
}

Structure active_structure() { return g_structure.load(); }
void set_active_structure(Structure s) { g_structure.store(s); }

Reward reward_zero() {
  return active_structure() == Structure::MulPositiveRationals ? Reward(1) : Reward(0);
}

Reward add(const Reward& r, const Reward& s) {
  if (active_structure() == Structure::MulPositiveRationals) return r * s;
  return r + s;
}

bool leq(const Reward& r, const Reward& s) { return r <= s; }

void require_probability(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("probability " + to_string(p) + " outside [0,1]");
}

Reward convex(const Rational& p, const Reward& r, const Reward& s) {
  require_probability(p);
  if (p == 1) return r;
  if (p == 0) return s;
  return p * r + (1 - p) * s;
}

bool in_carrier(const Reward& r) {
  switch (active_structure()) {
    case Structure::AddRationals: return true;
    case Structure::NonNegAdd: return r >= 0;
    case Structure::MulPositiveRationals: return r > 0;
  }
  return false;
}

Reward above_zero() {
  return active_structure() == Structure::MulPositiveRationals ? Reward(2) : Reward(1);
}

std::pair<Reward, Reward> condition_c_witness(const Rational& p, const Reward& s) {
  if (p <= 0 || p >= 1) throw DomainError("condition (C) needs 0 < p < 1, got " + to_string(p));
  if (!less(s, reward_zero())) throw DomainError("condition (C) needs s below zero, got " + to_string(s));
  switch (active_structure()) {
    case Structure::AddRationals: {
      Reward r = (1 - s) / p;
      r.canonicalize();
      return {Reward(0), r};
    }
    case Structure::MulPositiveRationals: {
      // s * (p r + (1 - p)) = 1 + s p > 1
      Reward r = (1 / s - (1 - p)) / p + 1;
      r.canonicalize();
      return {Reward(1), r};
    }
    case Structure::NonNegAdd: break;
  }
  throw DomainError(std::string("no condition (C) witness available for structure ") + structure_name(active_structure()));
}

bool gather_law_holds(std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  const std::array<Rational, 6> probs{make_rational(1, 2), make_rational(1, 3), make_rational(2, 3),
                                      make_rational(1, 4), make_rational(3, 4), make_rational(1, 5)};
  std::uniform_int_distribution<int> pick_p(0, static_cast<int>(probs.size()) - 1);
  std::uniform_int_distribution<int> num(1, 9);
  std::uniform_int_distribution<int> den(1, 4);
  auto sample = [&] {
    Reward r = make_rational(num(rng), den(rng));
    if (active_structure() == Structure::AddRationals && (rng() & 1)) r = -r;
    return r;
  };
  for (int i = 0; i < trials; ++i) {
    Rational p = probs[pick_p(rng)];
    Reward r = sample(), s = sample(), x = sample(), y = sample();
    Reward lhs = convex(p, add(r, x), add(s, y));
    Reward mid = convex(p, r, s);
    Reward rhs = convex(p, add(mid, x), add(mid, y));
    if (lhs != rhs) return false;
  }
  return true;
}

bool structure_supports_t3() {
  static std::mutex mu;
  static std::map<Structure, bool> cache;
  std::lock_guard<std::mutex> lock(mu);
  Structure s = active_structure();
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  bool ok = gather_law_holds();
  cache[s] = ok;
  return ok;
}

}  // namespace selcalc
