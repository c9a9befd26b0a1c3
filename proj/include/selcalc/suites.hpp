#pragma once

#include "selcalc/reward.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace selcalc {

struct SuiteConfig {
  std::uint64_t seed = 42;
  std::optional<std::size_t> cases;  // the suite's default when unset
  std::size_t gammas = 64;           // reward tables sampled per denotational check
  unsigned threads = 0;              // 0: one worker per hardware thread
};

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  std::vector<std::string> failures;  // the first few, in case order
  std::vector<std::string> notes;
  std::map<std::string, std::uint64_t> metrics;
  double seconds = 0;

  bool ok() const { return passed == total; }
};

struct SuiteInfo {
  std::string name;
  std::string description;
  std::size_t default_cases;
  std::function<SuiteResult(const SuiteConfig&)> run;
};

const std::vector<SuiteInfo>& suites();

// Throws Error for an unknown name.
const SuiteInfo& find_suite(const std::string& name);
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg = SuiteConfig());

// "name: passed/total OK" followed by notes, metrics and failures, one per line.
std::string format_report(const SuiteResult& r);

}  // namespace selcalc
