#include "selcalc/gamma.hpp"

#include <json.hpp>

namespace selcalc {

namespace {

std::uint64_t mix64(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

}  // namespace

Reward RewardTable::operator()(const std::string& key) const {
  auto it = entries.find(key);
  if (it != entries.end()) return it->second;
  if (fallback_pool.empty()) return reward_zero();
  std::uint64_t h = mix64(fallback_seed + 0x9e3779b97f4a7c15ULL);
  for (unsigned char c : key) h = mix64(h ^ c);
  return fallback_pool[h % fallback_pool.size()];
}

bool RewardTable::is_zero() const {
  for (const auto& [k, v] : entries)
    if (v != reward_zero()) return false;
  for (const auto& r : fallback_pool)
    if (r != reward_zero()) return false;
  return true;
}

std::string RewardTable::describe() const {
  if (entries.empty() && fallback_pool.empty()) return "the zero table";
  std::string s = reward_table_json(*this);
  if (fallback_pool.size() == 1)
    s += " (every other value: " + to_string(fallback_pool[0]) + ")";
  else if (!fallback_pool.empty())
    s += " (other values hashed with seed " + std::to_string(fallback_seed) + ")";
  return s;
}

RewardTable zero_table() { return RewardTable{}; }

RewardTable parse_reward_table(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed reward table: ") + e.what());
  }
  if (!j.is_object()) throw Error("reward table must be a JSON object");
  RewardTable t;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.value().is_string())
      t.entries[it.key()] = parse_rational(it.value().get<std::string>());
    else if (it.value().is_number_integer())
      t.entries[it.key()] = Reward(it.value().get<long>());
    else
      throw Error("reward for '" + it.key() + "' must be a rational string");
  }
  return t;
}

std::string reward_table_json(const RewardTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : t.entries) j[k] = to_string(v);
  return j.dump();
}

}  // namespace selcalc
