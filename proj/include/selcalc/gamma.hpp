#pragma once

#include "selcalc/reward.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace selcalc {

// A reward continuation given as a table keyed by printed values.
// Values missing from the table are scored from the fallback pool by a seeded hash, or zero if the pool is empty.
struct RewardTable {
  std::map<std::string, Reward> entries;
  std::vector<Reward> fallback_pool;
  std::uint64_t fallback_seed = 0;

  Reward operator()(const std::string& key) const;
  bool is_zero() const;
  std::string describe() const;
};

RewardTable zero_table();

// The JSON form {"tt":"1","ff":"2"}.
RewardTable parse_reward_table(const std::string& json_text);
std::string reward_table_json(const RewardTable& t);

}  // namespace selcalc
