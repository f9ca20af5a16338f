#pragma once

// Weingarten functions f for the relation H = f(H^2 - K) and the sampling
// checks that decide whether f is elliptic of minimal type.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eswmt {

struct ZeroHint {};
// f(t) = a t / (1 + t)
struct RationalHint {
  double a = 1.0;
};
using AnalyticHint = std::variant<ZeroHint, RationalHint>;

struct WeingartenProfile {
  std::function<double(double)> eval;   // t >= 0, eval(0) == 0
  std::function<double(double)> deriv;  // t > 0
  std::string label;
  std::optional<AnalyticHint> analytic_hint;

  double operator()(double t) const { return eval(t); }
};

WeingartenProfile zero_profile();
WeingartenProfile rational_profile(double a);

// Monotone cubic (Fritsch-Carlson) interpolation of (t, f) pairs; (0, 0) is
// prepended when missing. Linear extrapolation past the last knot.
WeingartenProfile table_profile(std::vector<std::pair<double, double>> knots);

// Registry lookup: "zero", "rational(a)", "custom-table". The table knots are
// only consulted for "custom-table".
WeingartenProfile make_profile(const std::string& spec,
                               const std::vector<std::pair<double, double>>& table = {});

// Log-spaced sample grid over [t_min, t_max].
struct Sampling {
  double t_min = 1e-8;
  double t_max = 1e8;
  int points = 1601;
  // Allows grids narrower than [1e-8, 1e8] x 1000 points.
  bool allow_narrow = false;

  std::vector<double> grid() const;
};

enum class Verdict { pass, fail, inconclusive };
const char* to_string(Verdict v);

struct ConditionResult {
  Verdict verdict = Verdict::pass;
  double value = 0.0;                                       // the quantity tested
  double witness_t = std::numeric_limits<double>::quiet_NaN();  // offending t, if any
  std::string detail;

  bool ok() const { return verdict == Verdict::pass; }
};

struct GrowthLimit {
  bool diverges = false;
  double value = std::numeric_limits<double>::infinity();  // finite estimate when !diverges
};

struct ProfileReport {
  bool passes = false;
  ConditionResult vanishes_at_zero;
  ConditionResult ellipticity;      // 4 t f'(t)^2 < 1
  ConditionResult non_negative;
  ConditionResult lipschitz_at_zero;
  ConditionResult liminf_at_zero;   // liminf_{t->0+} 4 t f'^2 < 1
  ConditionResult limsup_at_infinity;
  double sup_ellipticity = 0.0;
  double sup_ellipticity_at = 0.0;
  double c_bar = 0.0;               // sup f(t)/sqrt(t)
  double lipschitz_constant = 0.0;  // sup f(t)/t near 0
  std::optional<GrowthLimit> growth;  // empty when the tail was inconclusive
  std::string growth_detail;

  // f(0) = 0 and pointwise ellipticity hold but the full condition set does
  // not; the rotational builder still accepts such profiles for tau in the
  // admissible range.
  bool weak_hypotheses() const;
};

ProfileReport validate_profile(const WeingartenProfile& p, const Sampling& sampling = {});

// Smallest sampled c with f(t) <= c sqrt(t); refined around the grid maximum.
double sqrt_envelope_constant(const WeingartenProfile& p, const Sampling& sampling = {});

// phi(r) = int_0^r 2 f'(s^2) ds; r may be +infinity.
double adapted_phi(const WeingartenProfile& p, double r);

struct GrowthOptions {
  int max_exponent = 24;            // t_k = 10^k, k = 0..max_exponent
  double divergence_threshold = 1e6;
};

// lim_{t->inf} (sqrt(t) - f(t)). Throws on a non-monotone tail.
GrowthLimit growth_limit(const WeingartenProfile& p, const GrowthOptions& opts = {});

struct TauInterval {
  double lower = 0.0;  // open interval (lower, +inf)
  bool contains(double tau) const { return tau > lower && tau < std::numeric_limits<double>::infinity(); }
};

TauInterval admissible_tau_range(const GrowthLimit& limit);
TauInterval admissible_tau_range(const WeingartenProfile& p);

}  // namespace eswmt
