#pragma once

// Run configuration. Text form:
//
//   # comment
//   profile = rational(1)
//   tau = 1
//   [grid]
//   n_phi = 64          -> key "grid.n_phi"
//
// JSON form: an object whose nested objects map onto dotted keys. Unknown
// keys are rejected with the list of valid ones.

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace eswmt {

struct ConfigKey {
  const char* name;
  const char* default_value;
  const char* doc;
};

const std::vector<ConfigKey>& config_keys();

class RunConfig {
 public:
  RunConfig();  // all defaults

  static RunConfig from_text(const std::string& text);
  static RunConfig from_json(const std::string& text);
  // JSON when the first non-blank character is '{', text otherwise.
  static RunConfig from_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool is_set(const std::string& key) const;  // explicitly given, not defaulted
  // Copies the explicitly given keys of `other`.
  void merge(const RunConfig& other);

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  double positive(const std::string& key) const;
  long integer(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t minimum) const;
  bool flag(const std::string& key) const;
  std::pair<double, double> range(const std::string& key) const;  // "a,b" with a < b
  std::vector<std::pair<double, double>> table(const std::string& key) const;  // "t:f, t:f, ..."

  // Echo of every key with its effective value.
  nlohmann::json to_json() const;

 private:
  std::vector<std::pair<std::string, std::string>> values_;  // schema order
  std::vector<bool> explicit_;
  std::size_t slot(const std::string& key) const;
};

}  // namespace eswmt
