#include <cstdio>
#include <iostream>

#include "eswmt/acceptance.hpp"

int main() {
  const eswmt::SuiteResult suite =
      eswmt::run_suite([](const eswmt::CriterionResult& c) { std::cout << eswmt::summary_line(c) << std::endl; });
  std::printf("%s runtime < 2 min (%.1f s)\n", suite.time_pass() ? "PASS" : "FAIL", suite.seconds);
  return suite.numeric_pass() && suite.time_pass() ? 0 : 1;
}
