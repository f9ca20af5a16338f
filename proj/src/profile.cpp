#include "eswmt/profile.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "eswmt/error.hpp"

namespace eswmt {

namespace {

double checked(const std::function<double(double)>& fn, double t, const char* what) {
  const double v = fn(t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "profile evaluation failure: " << what << " is not finite at t = " << t;
    fail_numeric(os.str());
  }
  return v;
}

double ellipticity_at(const WeingartenProfile& p, double t) {
  const double d = checked(p.deriv, t, "f'");
  return 4.0 * t * d * d;
}

// Maximises fn over the log-grid, then refines with Brent on the bracketing
// cells (in log t). Returns {max value, argmax}.
std::pair<double, double> refined_max(const std::vector<double>& grid,
                                      const std::function<double(double)>& fn) {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = fn(grid[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const std::size_t lo = best == 0 ? 0 : best - 1;
  const std::size_t hi = std::min(best + 1, grid.size() - 1);
  if (lo == hi) return {best_v, grid[best]};
  auto neg = [&](double s) { return -fn(std::exp(s)); };
  const auto [s_star, neg_v] = boost::math::tools::brent_find_minima(
      neg, std::log(grid[lo]), std::log(grid[hi]), std::numeric_limits<double>::digits / 2);
  if (-neg_v > best_v) return {-neg_v, std::exp(s_star)};
  return {best_v, grid[best]};
}

// Monotone-tail extrapolation. `seq` is ordered toward the limit point and
// `decade` holds three samples one decade apart (also ordered toward the
// limit). Returns nullopt when the tail is not monotone.
std::optional<double> tail_limit(const std::vector<double>& seq, const std::array<double, 3>& decade) {
  double scale = 0.0;
  for (double v : seq) scale = std::max(scale, std::abs(v));
  const double slack = 1e-12 * scale + 1e-300;
  bool non_increasing = true;
  bool non_decreasing = true;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] > seq[i - 1] + slack) non_increasing = false;
    if (seq[i] < seq[i - 1] - slack) non_decreasing = false;
  }
  if (non_increasing) return seq.back();  // limit bounded above by the last value
  if (!non_decreasing) return std::nullopt;
  // Increasing toward the limit: Aitken delta-squared on decade samples.
  const double d1 = decade[1] - decade[0];
  const double d2 = decade[2] - decade[1];
  if (d2 <= 0.0) return decade[2];
  if (d1 <= d2) return std::numeric_limits<double>::infinity();  // not contracting
  return decade[2] + d2 * d2 / (d1 - d2);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

WeingartenProfile zero_profile() {
  WeingartenProfile p;
  p.eval = [](double) { return 0.0; };
  p.deriv = [](double) { return 0.0; };
  p.label = "zero";
  p.analytic_hint = ZeroHint{};
  return p;
}

WeingartenProfile rational_profile(double a) {
  if (!std::isfinite(a)) fail_config("rational(a): a must be finite");
  WeingartenProfile p;
  p.eval = [a](double t) { return a * t / (1.0 + t); };
  p.deriv = [a](double t) { return a / ((1.0 + t) * (1.0 + t)); };
  std::ostringstream os;
  os.precision(17);
  os << "rational(" << a << ")";
  p.label = os.str();
  p.analytic_hint = RationalHint{a};
  return p;
}

WeingartenProfile table_profile(std::vector<std::pair<double, double>> knots) {
  std::sort(knots.begin(), knots.end());
  if (knots.empty() || knots.front().first > 0.0) knots.insert(knots.begin(), {0.0, 0.0});
  if (knots.front().first < 0.0) fail_config("custom-table: knots must have t >= 0");
  if (knots.size() < 2) fail_config("custom-table: need at least one knot with t > 0");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) fail_config("custom-table: duplicate t in knots");
  }
  for (const auto& [t, f] : knots) {
    if (!std::isfinite(t) || !std::isfinite(f)) fail_config("custom-table: non-finite knot");
  }

  const std::size_t n = knots.size();
  std::vector<double> t(n), f(n), d(n);
  for (std::size_t i = 0; i < n; ++i) std::tie(t[i], f[i]) = knots[i];
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (f[i + 1] - f[i]) / (t[i + 1] - t[i]);

  // Fritsch-Carlson slopes.
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double h0 = t[i] - t[i - 1];
      const double h1 = t[i + 1] - t[i];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }

  struct Table {
    std::vector<double> t, f, d;
    std::size_t cell(double x) const {
      auto it = std::upper_bound(t.begin(), t.end(), x);
      std::size_t i = static_cast<std::size_t>(it - t.begin());
      return i == 0 ? 0 : i - 1;
    }
  };
  auto tab = std::make_shared<const Table>(Table{t, f, d});

  WeingartenProfile p;
  p.eval = [tab](double x) {
    const auto& T = *tab;
    if (x >= T.t.back()) return T.f.back() + T.d.back() * (x - T.t.back());
    const std::size_t i = T.cell(x);
    const double h = T.t[i + 1] - T.t[i];
    const double s = (x - T.t[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * T.f[i] + h10 * h * T.d[i] + h01 * T.f[i + 1] + h11 * h * T.d[i + 1];
  };
  p.deriv = [tab](double x) {
    const auto& T = *tab;
    if (x >= T.t.back()) return T.d.back();
    const std::size_t i = T.cell(x);
    const double h = T.t[i + 1] - T.t[i];
    const double s = (x - T.t[i]) / h;
    const double dh00 = 6 * s * s - 6 * s;
    const double dh10 = 3 * s * s - 4 * s + 1;
    const double dh01 = -6 * s * s + 6 * s;
    const double dh11 = 3 * s * s - 2 * s;
    return (dh00 * T.f[i] + dh01 * T.f[i + 1]) / h + dh10 * T.d[i] + dh11 * T.d[i + 1];
  };
  p.label = "custom-table";
  return p;
}

WeingartenProfile make_profile(const std::string& spec,
                               const std::vector<std::pair<double, double>>& table) {
  static const std::regex rational_re(R"(^\s*rational\s*\(\s*([^)]+?)\s*\)\s*$)");
  std::smatch m;
  if (spec == "zero") return zero_profile();
  if (std::regex_match(spec, m, rational_re)) {
    std::size_t used = 0;
    double a = 0.0;
    try {
      a = std::stod(m[1].str(), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != m[1].str().size()) fail_config("rational(a): cannot parse '" + m[1].str() + "'");
    return rational_profile(a);
  }
  if (spec == "custom-table") {
    if (table.empty()) fail_config("custom-table profile requires profile.table knots");
    return table_profile(table);
  }
  fail_config("unknown profile '" + spec + "'; valid: zero, rational(a), custom-table");
}

std::vector<double> Sampling::grid() const {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) fail_config("sampling: need 0 < t_min < t_max, points >= 2");
  if (!allow_narrow && (t_min > 1e-8 || t_max < 1e8 || points < 1000)) {
    fail_config("sampling must cover [1e-8, 1e8] with at least 1000 points (set allow_narrow to override)");
  }
  std::vector<double> g(static_cast<std::size_t>(points));
  const double l0 = std::log(t_min);
  const double l1 = std::log(t_max);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / (points - 1));
  g.front() = t_min;
  g.back() = t_max;
  return g;
}

bool ProfileReport::weak_hypotheses() const {
  return !passes && vanishes_at_zero.ok() && ellipticity.ok() && liminf_at_zero.ok();
}

ProfileReport validate_profile(const WeingartenProfile& p, const Sampling& sampling) {
  const std::vector<double> grid = sampling.grid();
  ProfileReport r;

  const double f0 = checked(p.eval, 0.0, "f");
  r.vanishes_at_zero.value = f0;
  if (f0 != 0.0) {
    r.vanishes_at_zero.verdict = Verdict::fail;
    r.vanishes_at_zero.witness_t = 0.0;
    r.vanishes_at_zero.detail = "f(0) != 0";
  }

  std::vector<double> fv(grid.size()), ev(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fv[i] = checked(p.eval, grid[i], "f");
    ev[i] = ellipticity_at(p, grid[i]);
  }

  // Pointwise ellipticity with refinement around the sampled maximum.
  const auto [sup_e, sup_at] = refined_max(grid, [&](double t) { return ellipticity_at(p, t); });
  r.sup_ellipticity = sup_e;
  r.sup_ellipticity_at = sup_at;
  r.ellipticity.value = sup_e;
  if (!(sup_e < 1.0)) {
    r.ellipticity.verdict = Verdict::fail;
    r.ellipticity.witness_t = sup_at;
    r.ellipticity.detail = "4 t f'(t)^2 >= 1";
  }

  // Non-negativity.
  {
    const auto it = std::min_element(fv.begin(), fv.end());
    r.non_negative.value = *it;
    if (*it < 0.0) {
      r.non_negative.verdict = Verdict::fail;
      r.non_negative.witness_t = grid[static_cast<std::size_t>(it - fv.begin())];
      r.non_negative.detail = "f(t) < 0";
    }
  }

  // Decade bookkeeping at both ends of the grid.
  const double per_decade = (grid.size() - 1) / std::log10(sampling.t_max / sampling.t_min);
  const std::size_t decade = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(per_decade)));
  if (grid.size() < 3 * decade + 1) fail_config("sampling must span at least three decades");

  // Lipschitz at 0: f(t)/t must stay bounded as t -> 0. Compare the maxima of
  // the ratio over the lowest decades.
  {
    auto decade_max = [&](std::size_t k) {
      double m = 0.0;
      for (std::size_t i = k * decade; i < (k + 1) * decade; ++i) m = std::max(m, fv[i] / grid[i]);
      return m;
    };
    const double m0 = decade_max(0);
    const double m1 = decade_max(1);
    double lip = 0.0;
    for (std::size_t i = 0; i < grid.size() && grid[i] <= 1e-2; ++i) lip = std::max(lip, fv[i] / grid[i]);
    r.lipschitz_constant = std::max(lip, m0);
    r.lipschitz_at_zero.value = m0;
    if (m0 > m1 * (1.0 + 1e-3) && m0 > 0.0) {
      r.lipschitz_at_zero.verdict = Verdict::fail;
      r.lipschitz_at_zero.witness_t = grid.front();
      r.lipschitz_at_zero.detail = "f(t)/t grows as t -> 0";
    }
  }

  auto limit_check = [&](ConditionResult& out, bool at_zero) {
    std::vector<double> seq;
    std::array<double, 3> dec{};
    if (at_zero) {
      for (std::size_t i = decade + 1; i-- > 0;) seq.push_back(ev[i]);
      dec = {ev[2 * decade], ev[decade], ev[0]};
      out.witness_t = grid.front();
    } else {
      for (std::size_t i = grid.size() - decade - 1; i < grid.size(); ++i) seq.push_back(ev[i]);
      dec = {ev[grid.size() - 1 - 2 * decade], ev[grid.size() - 1 - decade], ev.back()};
      out.witness_t = grid.back();
    }
    const auto lim = tail_limit(seq, dec);
    if (!lim) {
      out.verdict = Verdict::inconclusive;
      out.value = seq.back();
      out.detail = "non-monotone tail";
      return;
    }
    out.value = *lim;
    if (*lim < 1.0) {
      out.verdict = Verdict::pass;
      out.witness_t = std::numeric_limits<double>::quiet_NaN();
    } else {
      out.verdict = Verdict::fail;
      out.detail = "limit of 4 t f'(t)^2 is not below 1";
    }
  };
  limit_check(r.liminf_at_zero, true);
  limit_check(r.limsup_at_infinity, false);

  r.c_bar = refined_max(grid, [&](double t) { return checked(p.eval, t, "f") / std::sqrt(t); }).first;
  r.c_bar = std::max(r.c_bar, 0.0);

  try {
    r.growth = growth_limit(p);
  } catch (const Error& e) {
    r.growth_detail = e.what();
  }

  r.passes = r.vanishes_at_zero.ok() && r.ellipticity.ok() && r.non_negative.ok() &&
             r.lipschitz_at_zero.ok() && r.liminf_at_zero.ok() && r.limsup_at_infinity.ok();
  return r;
}

double sqrt_envelope_constant(const WeingartenProfile& p, const Sampling& sampling) {
  const auto grid = sampling.grid();
  const double c = refined_max(grid, [&](double t) { return checked(p.eval, t, "f") / std::sqrt(t); }).first;
  if (!(c < 1.0)) {
    std::ostringstream os;
    os << "no sub-square-root envelope: sup f(t)/sqrt(t) = " << c << " >= 1";
    fail_numeric(os.str());
  }
  return std::max(c, 0.0);
}

double adapted_phi(const WeingartenProfile& p, double r) {
  if (std::isnan(r) || r < 0.0) fail_config("adapted_phi: r must be >= 0");
  if (r == 0.0) return 0.0;
  auto integrand = [&](double s) {
    const double t = s * s;
    return t > 0.0 ? 2.0 * p.deriv(t) : 2.0 * p.deriv(std::numeric_limits<double>::min());
  };
  double err = 0.0;
  double l1 = 0.0;
  // One panel first: the adaptive estimate accumulates roundoff from every
  // leaf when the relative tolerance is out of reach (tiny r).
  double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, r, 0, 0.0, &err, &l1);
  if (!(err <= 1e-13))
    value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, r, 20, 1e-12, &err, &l1);
  if (!std::isfinite(value) || err > 1e-10 + 1e-13 * l1) {
    std::ostringstream os;
    os << "phi quadrature failure at r = " << r << " (error estimate " << err << ")";
    fail_numeric(os.str());
  }
  return value;
}

GrowthLimit growth_limit(const WeingartenProfile& p, const GrowthOptions& opts) {
  const int K = opts.max_exponent;
  if (K < 8) fail_config("growth_limit: max_exponent must be >= 8");
  // sqrt(t) - f(t) cancels at large t; keep exponents where roundoff stays
  // far below the value itself.
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> v;
  std::vector<double> noise;
  for (int k = 0; k <= K; ++k) {
    const double t = std::pow(10.0, k);
    const double root = std::sqrt(t);
    const double f = checked(p.eval, t, "f");
    const double value = root - f;
    const double floor = 16.0 * eps * (root + std::abs(f));
    if (k >= 8 && floor > 1e-9 * std::max(1.0, std::abs(value))) break;
    v.push_back(value);
    noise.push_back(floor);
  }
  const int used = static_cast<int>(v.size()) - 1;
  // Tail: upper half of the usable exponent range.
  std::vector<double> d;
  std::vector<double> dnoise;
  for (int k = used / 2 + 1; k <= used; ++k) {
    const auto i = static_cast<std::size_t>(k);
    d.push_back(v[i] - v[i - 1]);
    dnoise.push_back(noise[i] + noise[i - 1] + 1e-13 * std::max(1.0, std::abs(v[i])));
  }
  const double last = v.back();
  auto within_noise = [&](std::size_t i) { return std::abs(d[i]) <= dnoise[i]; };

  bool increasing = true;
  bool decreasing = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < -dnoise[i]) increasing = false;
    if (d[i] > dnoise[i]) decreasing = false;
  }
  if (!increasing && !decreasing) fail_numeric("inconclusive limit: sqrt(t) - f(t) has a non-monotone tail");

  if (increasing && last > opts.divergence_threshold) return {true, std::numeric_limits<double>::infinity()};

  bool flat = true;
  for (std::size_t i = 0; i < d.size(); ++i) flat = flat && within_noise(i);
  if (flat) return {false, last};

  // Contracting increments => convergent; extrapolate with Aitken.
  const std::size_t n = d.size();
  bool contracting = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    if (!within_noise(i) && std::abs(d[i]) > 0.9 * std::abs(d[i - 1])) contracting = false;
  }
  if (!contracting) fail_numeric("inconclusive limit: sqrt(t) - f(t) neither converges nor exceeds the divergence threshold");
  const double d1 = d[n - 2];
  const double d2 = d[n - 1];
  const double denom = d1 - d2;
  const double est = !within_noise(n - 1) && std::abs(denom) > 0.0 ? last + d2 * d2 / denom : last;
  return {false, est};
}

TauInterval admissible_tau_range(const GrowthLimit& limit) {
  if (limit.diverges) return {0.0};
  if (!(limit.value > 0.0)) {
    std::ostringstream os;
    os << "no admissible tau: lim (sqrt(t) - f(t)) = " << limit.value << " <= 0";
    fail_config(os.str());
  }
  return {1.0 / limit.value};
}

TauInterval admissible_tau_range(const WeingartenProfile& p) { return admissible_tau_range(growth_limit(p)); }

}  // namespace eswmt
