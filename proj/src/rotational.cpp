#include "eswmt/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eswmt/error.hpp"

namespace eswmt {

namespace {

constexpr double kPi = std::numbers::pi;

// d/ds of (rho, z, theta, other) where s is the chart parameter; `other` is
// sigma in the arc-length chart and arc length in the conformal chart.
struct ProfileRhs {
  const WeingartenProfile* profile;
  Chart chart;
  mutable double hint;

  OdeState<4> operator()(double, const OdeState<4>& y) const {
    const double rho = y[0];
    const double theta = y[2];
    const double kp = std::sin(theta) / rho;
    const double km = meridian_from_parallel(*profile, kp, hint).root;
    hint = km;
    const double w = chart == Chart::arc_length ? 1.0 : rho;
    const double other = chart == Chart::arc_length ? 1.0 / rho : rho;
    return {w * std::cos(theta), w * std::sin(theta), w * km, other};
  }
};

void check_state(const OdeState<4>& y, double s) {
  if (!(y[0] > 0.0) || !(y[2] > 0.0) || !(y[2] < kPi) || !std::isfinite(y[1])) {
    std::ostringstream os;
    os << "profile degeneration at parameter " << s << " (rho = " << y[0] << ", theta = " << y[2] << ")";
    fail_numeric(os.str());
  }
}

GeneratrixSample make_sample(const WeingartenProfile& p, Chart chart, double s, const OdeState<4>& y,
                             double hint) {
  GeneratrixSample g;
  g.rho = y[0];
  g.z = y[1];
  g.theta = y[2];
  if (chart == Chart::arc_length) {
    g.arc = s;
    g.sigma = y[3];
  } else {
    g.sigma = s;
    g.arc = y[3];
  }
  g.k_parallel = std::sin(g.theta) / g.rho;
  g.k_meridian = meridian_from_parallel(p, g.k_parallel, hint).root;
  return g;
}

void check_tau(const WeingartenProfile& p, double tau) {
  if (!std::isfinite(tau) || !(tau > 0.0)) {
    std::ostringstream os;
    os << "tau = " << tau << " is not admissible; need tau > 0";
    try {
      const TauInterval range = admissible_tau_range(p);
      os << " (admissible range (" << range.lower << ", inf))";
    } catch (const Error&) {
    }
    fail_config(os.str());
  }
  const TauInterval range = admissible_tau_range(p);
  if (!range.contains(tau)) {
    std::ostringstream os;
    os << "tau = " << tau << " is outside the admissible range (" << range.lower << ", inf)";
    fail_config(os.str());
  }
}

}  // namespace

RootSolve meridian_from_parallel(const WeingartenProfile& p, double kp, std::optional<double> hint,
                                 const RootOptions& opts) {
  if (!std::isfinite(kp)) fail_config("meridian_from_parallel: kappa_p must be finite");
  auto g = [&](double x) {
    const double h = 0.5 * (x - kp);
    return 0.5 * (x + kp) - p.eval(h * h);
  };
  auto dg = [&](double x) {
    const double h = 0.5 * (x - kp);
    const double q = h * h;
    return q > 0.0 ? 0.5 - p.deriv(q) * h : 0.5;
  };
  auto visit = [&](double x) {
    if (opts.on_iterate) opts.on_iterate(x);
  };

  const double scale = std::max(1.0, std::abs(kp));
  const double ftol = 1e-14 * scale;
  RootSolve out;

  double x = hint.value_or(-kp);
  if (!std::isfinite(x)) x = -kp;
  visit(x);
  double gx = g(x);
  if (!std::isfinite(gx)) fail_numeric("root bracketing failure: non-finite residual");
  if (std::abs(gx) <= ftol) return {x, std::abs(gx), 0};

  // Bracket by expansion away from the start in the downhill direction.
  double lo = x, hi = x, glo = gx, ghi = gx;
  double step = 2.0 * std::abs(gx) + 1e-12 * scale;
  const double dir = gx < 0.0 ? 1.0 : -1.0;
  for (;;) {
    const double y = x + dir * step;
    visit(y);
    const double gy = g(y);
    if (!std::isfinite(gy)) fail_numeric("root bracketing failure: non-finite residual");
    ++out.iterations;
    if (dir > 0.0) {
      if (gy >= 0.0) { hi = y; ghi = gy; break; }
      lo = y; glo = gy;
    } else {
      if (gy <= 0.0) { lo = y; glo = gy; break; }
      hi = y; ghi = gy;
    }
    step *= 2.0;
    if (step > opts.max_bracket) {
      std::ostringstream os;
      os << "root bracketing failure for kappa_p = " << kp << " (bracket exceeded " << opts.max_bracket << ")";
      fail_numeric(os.str());
    }
  }
  if (glo == 0.0) return {lo, 0.0, out.iterations};
  if (ghi == 0.0) return {hi, 0.0, out.iterations};

  x = std::abs(glo) < std::abs(ghi) ? lo : hi;
  gx = x == lo ? glo : ghi;
  for (int it = 0; it < opts.max_iterations; ++it) {
    ++out.iterations;
    const double d = dg(x);
    double next = d > 0.0 ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    x = next;
    visit(x);
    gx = g(x);
    if (std::abs(gx) <= ftol) break;
    if (gx < 0.0) lo = x; else hi = x;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  out.root = x;
  out.residual = std::abs(gx);
  return out;
}

Generatrix integrate_generatrix(const WeingartenProfile& p, double tau, double arc_max, const StepControl& control) {
  check_tau(p, tau);
  if (!(arc_max > 0.0) || !std::isfinite(arc_max)) fail_config("integrate_generatrix: arc_max must be > 0");

  Generatrix g;
  g.tau = tau;
  g.profile_id = p.label;
  g.chart = Chart::arc_length;

  ProfileRhs rhs{&p, Chart::arc_length, -1.0 / tau};
  // Neck start: theta'(0) follows from the root solve at kappa_p = 1/tau,
  // which is what the first stage evaluates.
  OdeState<4> y{tau, 0.0, kPi / 2, 0.0};
  g.samples.push_back(make_sample(p, Chart::arc_length, 0.0, y, -1.0 / tau));

  double s = 0.0;
  std::size_t steps = 0;
  if (control.fixed_step > 0.0) {
    const double h0 = control.fixed_step;
    while (s < arc_max * (1.0 - 1e-14)) {
      const double h = std::min(h0, arc_max - s);
      y = rk4_step<4>(rhs, s, y, h);
      s = (arc_max - s <= h0) ? arc_max : s + h;
      check_state(y, s);
      g.samples.push_back(make_sample(p, Chart::arc_length, s, y, rhs.hint));
      if (++steps > control.max_steps) fail_numeric("stiff integration failure: step budget exhausted");
    }
    return g;
  }

  double h = std::min(control.initial_step, control.max_step);
  while (s < arc_max) {
    const bool last = h >= arc_max - s;
    const double step = last ? arc_max - s : h;
    OdeState<4> trial = y;
    const DoublingResult r = rk4_doubling_step<4>(rhs, s, trial, step, control.tolerance);
    if (!r.accepted) {
      h = r.next_step;
      if (h < control.min_step) {
        std::ostringstream os;
        os << "stiff integration failure at arc length " << s;
        fail_numeric(os.str());
      }
      continue;
    }
    y = trial;
    s = last ? arc_max : s + step;
    check_state(y, s);
    g.samples.push_back(make_sample(p, Chart::arc_length, s, y, rhs.hint));
    h = std::min(r.next_step, control.max_step);
    if (++steps > control.max_steps) fail_numeric("stiff integration failure: step budget exhausted");
  }
  return g;
}

Generatrix sample_generatrix(const WeingartenProfile& p, double tau, Chart chart, double s_lo, double s_hi,
                             std::size_t intervals, std::size_t substeps) {
  check_tau(p, tau);
  if (!(s_hi > s_lo) || intervals < 1 || substeps < 1) fail_config("sample_generatrix: need s_lo < s_hi, intervals >= 1");

  Generatrix g;
  g.tau = tau;
  g.profile_id = p.label;
  g.chart = chart;

  ProfileRhs rhs{&p, chart, -1.0 / tau};
  OdeState<4> y{tau, 0.0, kPi / 2, 0.0};
  const double h = (s_hi - s_lo) / static_cast<double>(intervals);
  const double hs = h / static_cast<double>(substeps);

  // Travel from the neck to s_lo.
  if (s_lo != 0.0) {
    const auto n0 = static_cast<std::size_t>(std::ceil(std::abs(s_lo) / hs));
    const double step = s_lo / static_cast<double>(n0);
    double s = 0.0;
    for (std::size_t k = 0; k < n0; ++k) {
      y = rk4_step<4>(rhs, s, y, step);
      s = s_lo * static_cast<double>(k + 1) / static_cast<double>(n0);
      check_state(y, s);
    }
  }
  g.samples.reserve(intervals + 1);
  g.samples.push_back(make_sample(p, chart, s_lo, y, rhs.hint));
  for (std::size_t i = 0; i < intervals; ++i) {
    const double s0 = s_lo + h * static_cast<double>(i);
    for (std::size_t k = 0; k < substeps; ++k) y = rk4_step<4>(rhs, s0 + hs * static_cast<double>(k), y, hs);
    const double s1 = i + 1 == intervals ? s_hi : s_lo + h * static_cast<double>(i + 1);
    check_state(y, s1);
    g.samples.push_back(make_sample(p, chart, s1, y, rhs.hint));
  }
  return g;
}

Generatrix mirror_extend(const Generatrix& half) {
  if (half.samples.empty() || half.samples.front().theta != kPi / 2 || half.samples.front().z != 0.0 ||
      half.parameter(0) != 0.0) {
    fail_config("not a neck-anchored generatrix");
  }
  Generatrix full;
  full.tau = half.tau;
  full.profile_id = half.profile_id;
  full.chart = half.chart;
  const auto& src = half.samples;
  full.samples.reserve(2 * src.size() - 1);
  for (std::size_t i = src.size(); i-- > 1;) {
    GeneratrixSample m = src[i];
    m.arc = -m.arc;
    m.sigma = -m.sigma;
    m.z = -m.z;
    m.theta = kPi - m.theta;
    full.samples.push_back(m);
  }
  full.samples.insert(full.samples.end(), src.begin(), src.end());
  return full;
}

ParametricPatch revolve(const Generatrix& g, std::size_t n_theta, Exec exec) {
  if (n_theta < 8) fail_config("revolve: n_theta must be >= 8");
  if (g.samples.size() < 2) fail_config("revolve: generatrix needs at least two samples");
  std::vector<double> u(g.samples.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = g.parameter(i);

  ParametricPatch patch;
  patch.grid = Grid2::periodic(std::move(u), n_theta);
  const std::size_t n = patch.grid.size();
  patch.X.resize(n);
  patch.E.resize(n); patch.F.resize(n); patch.G.resize(n);
  patch.L.resize(n); patch.M.resize(n); patch.Nn.resize(n);
  patch.normal.resize(n);
  patch.H.resize(n); patch.K.resize(n); patch.q.resize(n); patch.k1.resize(n); patch.k2.resize(n);

  const std::size_t nv = patch.grid.nv();
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
    const auto k = static_cast<std::size_t>(idx);
    const std::size_t i = k / nv;
    const double phi = patch.grid.v[k % nv];
    const GeneratrixSample& s = g.samples[i];
    const double w = g.speed(i);
    const double c = std::cos(phi), sn = std::sin(phi);
    patch.X[k] = Vec3(s.rho * c, s.rho * sn, s.z);
    patch.normal[k] = Vec3(-std::sin(s.theta) * c, -std::sin(s.theta) * sn, std::cos(s.theta));
    patch.E[k] = w * w;
    patch.F[k] = 0.0;
    patch.G[k] = s.rho * s.rho;
    patch.L[k] = s.k_meridian * w * w;
    patch.M[k] = 0.0;
    patch.Nn[k] = s.k_parallel * s.rho * s.rho;
    patch.H[k] = s.mean_curvature();
    patch.K[k] = s.gauss_curvature();
    patch.q[k] = s.skew_curvature();
    patch.k1[k] = std::max(s.k_meridian, s.k_parallel);
    patch.k2[k] = std::min(s.k_meridian, s.k_parallel);
  });
  return patch;
}

GeneratrixSample sample_at_arc(const Generatrix& g, double arc) {
  const auto& s = g.samples;
  if (s.empty()) fail_config("sample_at_arc: empty generatrix");
  if (arc < s.front().arc - 1e-12 || arc > s.back().arc + 1e-12) {
    std::ostringstream os;
    os << "arc length " << arc << " outside sampled range [" << s.front().arc << ", " << s.back().arc << "]";
    fail_config(os.str());
  }
  auto it = std::lower_bound(s.begin(), s.end(), arc, [](const GeneratrixSample& a, double v) { return a.arc < v; });
  if (it == s.begin()) return s.front();
  if (it == s.end()) return s.back();
  if (it->arc == arc) return *it;
  const GeneratrixSample& b = *it;
  const GeneratrixSample& a = *(it - 1);
  const double h = b.arc - a.arc;
  const double t = (arc - a.arc) / h;
  // Cubic Hermite in arc length for (rho, z, theta); their arc derivatives
  // are (cos theta, sin theta, kappa_m).
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  auto herm = [&](double fa, double da, double fb, double db) { return h00 * fa + h10 * h * da + h01 * fb + h11 * h * db; };
  GeneratrixSample out;
  out.arc = arc;
  out.rho = herm(a.rho, std::cos(a.theta), b.rho, std::cos(b.theta));
  out.z = herm(a.z, std::sin(a.theta), b.z, std::sin(b.theta));
  out.theta = herm(a.theta, a.k_meridian, b.theta, b.k_meridian);
  out.sigma = herm(a.sigma, 1.0 / a.rho, b.sigma, 1.0 / b.rho);
  out.k_meridian = (1 - t) * a.k_meridian + t * b.k_meridian;
  out.k_parallel = std::sin(out.theta) / out.rho;
  return out;
}

BandCurvature band_total_curvature(const WeingartenProfile& p, const Generatrix& g, double l1, double l2,
                                   std::size_t n_phi) {
  if (l2 < l1) fail_config("band_total_curvature: need l1 <= l2");
  BandCurvature out;
  if (l1 == l2) return out;
  if (g.chart != Chart::arc_length) fail_config("band_total_curvature: arc-length generatrix required");
  const GeneratrixSample a = sample_at_arc(g, l1);
  const GeneratrixSample b = sample_at_arc(g, l2);
  out.turning_angle = 2.0 * kPi * (std::cos(a.theta) - std::cos(b.theta));

  std::size_t n = static_cast<std::size_t>(std::ceil((l2 - l1) / 0.005));
  n = std::clamp<std::size_t>(n + (n % 2), 2, 400000);
  const Generatrix fine = sample_generatrix(p, g.tau, Chart::arc_length, l1, l2, n, 2);
  const double h = (l2 - l1) / static_cast<double>(n);
  const double dphi = 2.0 * kPi / static_cast<double>(n_phi);
  std::vector<double> terms(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const GeneratrixSample& s = fine.samples[i];
    double ring = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) ring += s.gauss_curvature() * s.rho * dphi;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms[i] = w * ring;
  }
  out.quadrature = pairwise_sum(terms) * h / 3.0;
  return out;
}

const char* to_string(EndBehavior b) {
  switch (b) {
    case EndBehavior::proper: return "proper";
    case EndBehavior::strip: return "strip";
    case EndBehavior::undetermined: return "undetermined";
  }
  return "?";
}

EndBehavior classify_end_behavior(const Generatrix& half) {
  const auto& s = half.samples;
  if (s.size() < 8) return EndBehavior::undetermined;
  const double rho_max = s.back().rho;
  if (rho_max < 10.0 * half.tau) return EndBehavior::undetermined;
  // Least-squares slope of z against log rho over the outer decade.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& p : s) {
    if (p.rho < rho_max / 10.0) continue;
    const double x = std::log(p.rho);
    sx += x; sy += p.z; sxx += x * x; sxy += x * p.z;
    ++m;
  }
  if (m < 4) return EndBehavior::undetermined;
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (slope > 1e-2 * half.tau) return EndBehavior::proper;
  if (std::abs(slope) < 1e-4 * half.tau) return EndBehavior::strip;
  return EndBehavior::undetermined;
}

GeneratrixDiagnostics diagnose(const WeingartenProfile& p, const Generatrix& g) {
  GeneratrixDiagnostics d;
  const auto& s = g.samples;
  if (s.empty()) return d;
  d.min_rho = s.front().rho;
  d.min_rho_arc = s.front().arc;
  d.max_gauss_curvature = -std::numeric_limits<double>::infinity();
  for (const auto& x : s) {
    if (x.rho < d.min_rho) {
      d.min_rho = x.rho;
      d.min_rho_arc = x.arc;
    }
    d.weingarten_residual = std::max(d.weingarten_residual, std::abs(x.mean_curvature() - p.eval(x.skew_curvature())));
    d.max_gauss_curvature = std::max(d.max_gauss_curvature, x.gauss_curvature());
  }
  // rho as a function of z; samples are ordered by increasing z.
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double z0 = s[i - 1].z, z1 = s[i].z, z2 = s[i + 1].z;
    if (!(z1 > z0) || !(z2 > z1)) continue;
    const double d2 = 2.0 * ((s[i + 1].rho - s[i].rho) / (z2 - z1) - (s[i].rho - s[i - 1].rho) / (z1 - z0)) / (z2 - z0);
    d.convexity_violation = std::min(d.convexity_violation, d2);
  }
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double dl = s[i + 1].arc - s[i - 1].arc;
    if (!(dl > 0.0)) continue;
    const double dr = (s[i + 1].rho - s[i - 1].rho) / dl;
    const double dz = (s[i + 1].z - s[i - 1].z) / dl;
    d.arc_length_defect = std::max(d.arc_length_defect, std::abs(std::sqrt(dr * dr + dz * dz) - 1.0));
  }
  return d;
}

}  // namespace eswmt
