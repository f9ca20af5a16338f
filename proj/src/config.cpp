#include "eswmt/config.hpp"

#include <algorithm>
#include <sstream>

#include "eswmt/error.hpp"
#include "eswmt/io.hpp"

namespace eswmt {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"profile", "rational(1)", "profile name: zero, rational(a), custom-table"},
      {"profile.table", "", "knots t:f separated by commas (custom-table)"},
      {"tau", "1", "neck curvature parameter"},
      {"arc_max", "1100", "arc length integrated on each side of the neck"},
      {"truncation", "200", "arc length at which global quadratures are truncated"},
      {"threads", "0", "OpenMP threads (0 keeps the runtime default)"},
      {"input", "", "surface file for verify and fit commands"},
      {"output.prefix", "eswmt_out", "prefix of written artifacts"},
      {"output.timings", "false", "include wall-clock timings in reports"},
      {"grid.n_arc", "801", "samples along the generatrix"},
      {"grid.n_phi", "64", "samples around the axis"},
      {"grid.mesh_arc", "10", "half arc length of exported meshes and Codazzi bands"},
      {"tol.residual", "1e-8", "Weingarten residual tolerance"},
      {"tol.jm", "1e-3", "total-curvature tolerance"},
      {"tol.roundtrip", "1e-4", "Kenmotsu round-trip Hausdorff tolerance"},
      {"tol.codazzi", "1e-10", "pointwise tolerance of the adapted-pair identities"},
      {"tol.simons", "1e-2", "tolerance of the Simons residual on a single grid"},
      {"weierstrass.preset", "catenoid", "enneper, catenoid, helicoid-assoc, plane"},
      {"weierstrass.h_re", "1", "custom data h = c z^m, real part of c"},
      {"weierstrass.h_im", "0", "custom data, imaginary part of c"},
      {"weierstrass.h_power", "0", "custom data, exponent m"},
      {"weierstrass.g_re", "1", "custom data G = c z^m, real part of c"},
      {"weierstrass.g_im", "0", "custom data, imaginary part of c"},
      {"weierstrass.g_power", "1", "custom data, exponent m"},
      {"weierstrass.r_inner", "0.2", "inner radius of the parameter annulus (0 for a disk)"},
      {"weierstrass.r_outer", "5", "outer radius of the parameter annulus or half-width of the square"},
      {"weierstrass.n_r", "65", "radial samples"},
      {"weierstrass.n_phi", "64", "angular samples"},
      {"kenmotsu.band", "0.2,3", "arc-length band of the rotational test surface"},
      {"kenmotsu.n_sigma", "161", "samples across the band"},
      {"kenmotsu.n_phi", "320", "samples around the axis"},
      {"fit.end", "top", "top or bottom"},
      {"fit.annulus", "10,1000", "radial range of the end fit"},
      {"verify.genus", "0", "genus of the surface"},
      {"verify.ends", "2", "number of ends"},
  };
  return keys;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string valid_keys() {
  std::string out;
  for (const auto& k : config_keys()) out += (out.empty() ? "" : ", ") + std::string(k.name);
  return out;
}

double parse_number(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (!trim(s.substr(used)).empty()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    fail_config("config key '" + key + "': '" + s + "' is not a number");
  }
}

void flatten(const nlohmann::json& j, const std::string& prefix, RunConfig& cfg) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      flatten(v, key, cfg);
    } else if (v.is_string()) {
      cfg.set(key, v.get<std::string>());
    } else if (v.is_boolean()) {
      cfg.set(key, v.get<bool>() ? "true" : "false");
    } else if (v.is_number_integer()) {
      cfg.set(key, std::to_string(v.get<long long>()));
    } else if (v.is_number()) {
      cfg.set(key, format_double(v.get<double>()));
    } else if (v.is_array()) {
      std::string joined;
      for (const auto& e : v) {
        if (!e.is_number()) fail_config("config key '" + key + "': arrays must hold numbers");
        joined += (joined.empty() ? "" : ",") + format_double(e.get<double>());
      }
      cfg.set(key, joined);
    } else {
      fail_config("config key '" + key + "' has an unsupported value");
    }
  }
}

}  // namespace

RunConfig::RunConfig() {
  for (const auto& k : config_keys()) values_.emplace_back(k.name, k.default_value);
  explicit_.assign(values_.size(), false);
}

std::size_t RunConfig::slot(const std::string& key) const {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i].first == key) return i;
  fail_config("unknown config key '" + key + "'; valid keys: " + valid_keys());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::size_t i = slot(key);
  values_[i].second = trim(value);
  explicit_[i] = true;
}

bool RunConfig::is_set(const std::string& key) const { return explicit_[slot(key)]; }

void RunConfig::merge(const RunConfig& other) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!other.explicit_[i]) continue;
    values_[i].second = other.values_[i].second;
    explicit_[i] = true;
  }
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_config("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_config("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    cfg.set(section.empty() ? key : section + "." + key, line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail_config(std::string("config json: ") + e.what());
  }
  if (!j.is_object()) fail_config("config json must be an object");
  RunConfig cfg;
  flatten(j, "", cfg);
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return from_json(text);
  return from_text(text);
}

const std::string& RunConfig::text(const std::string& key) const { return values_[slot(key)].second; }

double RunConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

double RunConfig::positive(const std::string& key) const {
  const double x = number(key);
  if (!(x > 0.0)) fail_config("config key '" + key + "' must be positive, got " + text(key));
  return x;
}

long RunConfig::integer(const std::string& key) const {
  const double x = number(key);
  if (x != static_cast<double>(static_cast<long>(x)))
    fail_config("config key '" + key + "' must be an integer, got " + text(key));
  return static_cast<long>(x);
}

std::size_t RunConfig::count(const std::string& key, std::size_t minimum) const {
  const long n = integer(key);
  if (n < static_cast<long>(minimum))
    fail_config("config key '" + key + "' must be at least " + std::to_string(minimum) + ", got " + text(key));
  return static_cast<std::size_t>(n);
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& s = text(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off" || s.empty()) return false;
  fail_config("config key '" + key + "' must be true or false, got " + s);
}

std::pair<double, double> RunConfig::range(const std::string& key) const {
  const std::string& s = text(key);
  const auto comma = s.find(',');
  if (comma == std::string::npos) fail_config("config key '" + key + "' must be 'lo,hi', got " + s);
  const double a = parse_number(key, trim(s.substr(0, comma)));
  const double b = parse_number(key, trim(s.substr(comma + 1)));
  if (!(a < b)) fail_config("config key '" + key + "' needs lo < hi, got " + s);
  return {a, b};
}

std::vector<std::pair<double, double>> RunConfig::table(const std::string& key) const {
  std::vector<std::pair<double, double>> out;
  std::istringstream in(text(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) fail_config("config key '" + key + "': knot '" + item + "' must be t:f");
    out.emplace_back(parse_number(key, trim(item.substr(0, colon))), parse_number(key, trim(item.substr(colon + 1))));
  }
  return out;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace eswmt
