#pragma once

#include <stdexcept>
#include <string>

namespace eswmt {

// Distinguishes failures so the CLI can map them onto exit codes.
enum class ErrorKind {
  config,   // bad input, violated precondition
  numeric,  // solver / quadrature / fit failure
  io,       // file system
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_config(const std::string& what) {
  throw Error(ErrorKind::config, what);
}
[[noreturn]] inline void fail_numeric(const std::string& what) {
  throw Error(ErrorKind::numeric, what);
}
[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::io, what);
}

}  // namespace eswmt
