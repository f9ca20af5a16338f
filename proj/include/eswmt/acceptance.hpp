#pragma once

// The acceptance suite as library code, shared by `verify all` and the
// acceptance test binary. Each criterion collects numeric checks; a
// criterion passes when all of its checks do.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace eswmt {

struct Check {
  std::string name;
  std::string relation;  // "|value - target| <= tolerance", "value <= target", "value >= target", "holds"
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check check_near(std::string name, double value, double target, double tolerance);
Check check_at_most(std::string name, double value, double bound);
Check check_at_least(std::string name, double value, double bound);
Check check_holds(std::string name, bool ok, double evidence);

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0: no per-criterion limit
  std::string error;        // set when the criterion threw
  bool numeric_pass() const;
  bool time_pass() const { return time_limit <= 0.0 || seconds < time_limit; }
};

constexpr int kCriterionCount = 10;
constexpr double kSuiteTimeLimit = 120.0;

// Runs one criterion (1..10), catching library errors into `error`.
CriterionResult run_criterion(int id);

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  double seconds = 0.0;
  bool numeric_pass() const;
  bool time_pass() const;
};

SuiteResult run_suite(const std::function<void(const CriterionResult&)>& on_done = {});

// Checks and pass flags; wall-clock fields only when `timings` is set so
// that reports of identical runs are identical.
nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const CriterionResult& r, bool timings);

// One "PASS|FAIL <id> <title> ..." line.
std::string summary_line(const CriterionResult& r);

}  // namespace eswmt
