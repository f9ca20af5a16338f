#pragma once

// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 numeric failure (including a failed check), 4 I/O failure.

#include <iosfwd>
#include <string>
#include <vector>

namespace eswmt {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

extern const char* const kVersion;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eswmt
