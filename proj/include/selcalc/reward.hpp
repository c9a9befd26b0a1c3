#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace selcalc {

using Rational = mpq_class;
using Reward = mpq_class;

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a requested operation is outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational make_rational(long num, long den = 1);

enum class Structure { AddRationals, NonNegAdd, MulPositiveRationals };

const char* structure_name(Structure s);
Structure structure_from_name(std::string_view name);

// The structure used by every reward operation in the process.
Structure active_structure();
void set_active_structure(Structure s);

// Restores the previously active structure on scope exit.
class StructureScope {
 public:
  explicit StructureScope(Structure s) : saved_(active_structure()) { set_active_structure(s); }
  ~StructureScope() { set_active_structure(saved_); }
  StructureScope(const StructureScope&) = delete;
  StructureScope& operator=(const StructureScope&) = delete;

 private:
  Structure saved_;
};

Reward reward_zero();
Reward add(const Reward& r, const Reward& s);
bool leq(const Reward& r, const Reward& s);
inline bool less(const Reward& r, const Reward& s) { return !leq(s, r); }
Reward convex(const Rational& p, const Reward& r, const Reward& s);
bool in_carrier(const Reward& r);

// An element strictly above the monoid zero.
Reward above_zero();

// Returns (l, r) with s + (r +_p l) > l for 0 < p < 1 and s below zero.
std::pair<Reward, Reward> condition_c_witness(const Rational& p, const Reward& s);

// Randomized check that r.x +_p s.y = (r +_p s).x +_p (r +_p s).y at the scalar level.
bool gather_law_holds(std::uint64_t seed = 1, int trials = 1000);

// Cached per structure: gather_law_holds with the default seed and trial count.
bool structure_supports_t3();

void require_probability(const Rational& p);

}  // namespace selcalc
