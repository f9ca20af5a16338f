#include "eswmt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "eswmt/error.hpp"
#include "eswmt/stencil.hpp"

namespace eswmt {

namespace {

constexpr double kPi = std::numbers::pi;

// Simpson integral of fn(sample) in arc length over [l1, l2] on a uniform
// resample of the profile.
double arc_integral(const WeingartenProfile& p, double tau, double l1, double l2,
                    const std::function<double(const GeneratrixSample&)>& fn, double step = 0.005) {
  if (l2 <= l1) return 0.0;
  std::size_t n = static_cast<std::size_t>(std::ceil((l2 - l1) / step));
  n = std::clamp<std::size_t>(n + (n % 2), 2, 400000);
  const Generatrix fine = sample_generatrix(p, tau, Chart::arc_length, l1, l2, n, 2);
  std::vector<double> terms(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    terms[i] = w * fn(fine.samples[i]);
  }
  return pairwise_sum(terms) * (l2 - l1) / static_cast<double>(n) / 3.0;
}

// int_{x}^{inf} of a power-law tail fitted through w(x/4), w(x/2), w(x).
double power_tail(const std::function<double(double)>& w, double x) {
  const double w1 = w(x / 4.0), w2 = w(x / 2.0), w3 = w(x);
  if (w2 == 0.0 && w3 == 0.0) return 0.0;
  if (w1 == 0.0 || w2 == 0.0 || w3 == 0.0 || (w1 > 0) != (w2 > 0) || (w2 > 0) != (w3 > 0))
    fail_numeric("tail fit failed");
  const double s_near = std::log(w2 / w1) / std::log(2.0);
  const double s_far = std::log(w3 / w2) / std::log(2.0);
  const double p = -s_far;
  if (!(p > 1.0) || std::abs(s_far - s_near) > 0.1 * std::max(1.0, std::abs(s_far))) fail_numeric("tail fit failed");
  return w3 * x / (p - 1.0);
}

// theta = c0 + c1 / rho + c2 / rho^2 on the outer quarter of rho.
double fit_limit_angle(const Generatrix& half) {
  const double rho_max = half.samples.back().rho;
  std::vector<const GeneratrixSample*> pts;
  for (const auto& s : half.samples)
    if (s.rho >= rho_max / 4.0) pts.push_back(&s);
  if (pts.size() < 6) fail_numeric("tail fit failed: too few samples for the limit angle");
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = 1.0 / pts[i]->rho;
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = x;
    A(static_cast<Eigen::Index>(i), 2) = x * x;
    b(static_cast<Eigen::Index>(i)) = pts[i]->theta;
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

double gauss_density(const GeneratrixSample& s) { return 2.0 * kPi * s.rho * s.gauss_curvature(); }

}  // namespace

const char* to_string(TailMode m) {
  switch (m) {
    case TailMode::turning_angle: return "turning-angle";
    case TailMode::radial_decay: return "radial-decay";
    case TailMode::none: return "none";
  }
  return "?";
}

TailMode parse_tail_mode(const std::string& s) {
  if (s == "turning-angle") return TailMode::turning_angle;
  if (s == "radial-decay") return TailMode::radial_decay;
  if (s == "none") return TailMode::none;
  fail_config("unknown tail mode '" + s + "' (valid: turning-angle, radial-decay, none)");
}

void CurvatureBudget::set_topology(int g, int k) {
  if (g < 0 || k < 1) fail_config("topology needs genus >= 0 and ends >= 1");
  genus = g;
  ends = k;
  jm_target = 4.0 * kPi * (1 - g - k);
  deficit = std::abs(total - jm_target);
}

CurvatureBudget total_curvature(const WeingartenProfile& p, const Generatrix& half, double arc_R, TailMode mode) {
  if (half.chart != Chart::arc_length || half.samples.empty() || half.samples.front().arc != 0.0)
    fail_config("total_curvature: neck-anchored arc-length generatrix required");
  if (!(arc_R > 0.0) || arc_R > half.samples.back().arc) fail_config("total_curvature: truncation outside the samples");
  CurvatureBudget b;
  b.mode = mode;
  // Both halves contribute equally by the reflection symmetry.
  b.quadrature_value = 2.0 * arc_integral(p, half.tau, 0.0, arc_R, gauss_density);
  switch (mode) {
    case TailMode::turning_angle: {
      const double fitted = fit_limit_angle(half);
      b.limit_angle_fit = fitted;
      const double limit = std::abs(fitted) < std::abs(fitted - kPi) ? 0.0 : kPi;
      if (std::abs(fitted - limit) > 1e-3) {
        std::ostringstream os;
        os << "tail fit failed: limit angle " << fitted << " not resolved";
        fail_numeric(os.str());
      }
      const double theta_R = sample_at_arc(half, arc_R).theta;
      b.tail_estimate = 2.0 * 2.0 * kPi * (std::cos(theta_R) - std::cos(limit));
      break;
    }
    case TailMode::radial_decay:
      b.tail_estimate = 2.0 * power_tail([&](double l) { return gauss_density(sample_at_arc(half, l)); }, arc_R);
      break;
    case TailMode::none: break;
  }
  b.total = b.quadrature_value + b.tail_estimate;
  return b;
}

CurvatureBudget total_curvature(const WeierstrassData& data, double r_inner, double R, TailMode mode) {
  if (mode == TailMode::turning_angle) fail_config("turning-angle tails need a rotational surface");
  const MetricCurvature mc =
      metric_curvature(data, r_inner, R, 33, 128, Exec::parallel, mode == TailMode::radial_decay);
  CurvatureBudget b;
  b.mode = mode;
  b.quadrature_value = mc.quadrature;
  if (mode == TailMode::radial_decay) b.tail_estimate = mc.inner_tail + mc.outer_tail;
  b.total = b.quadrature_value + b.tail_estimate;
  return b;
}

JorgeMeeksReport jorge_meeks_check(const CurvatureBudget& budget, int genus, int ends, double tol) {
  if (genus < 0 || ends < 1) fail_config("jorge_meeks_check needs genus >= 0 and ends >= 1");
  JorgeMeeksReport r;
  r.target = 4.0 * kPi * (1 - genus - ends);
  r.deficit = std::abs(budget.total - r.target);
  r.pass = r.deficit <= tol;
  const double m = std::abs(budget.total);
  if (m < 4.0 * kPi - tol) r.regime = "plane regime";
  else if (m < 8.0 * kPi - tol) r.regime = "plane or special catenoid regime";
  else r.regime = "outside the plane/catenoid classification";
  // Every (g', k') with g' + k' = genus + ends gives the same target.
  if (genus + ends >= 2) {
    r.ambiguous_topology = true;
    std::ostringstream os;
    os << "topology must be supplied by caller: the formula cannot distinguish (" << genus << "," << ends
       << ") from";
    for (int k = 1; k <= genus + ends; ++k) {
      if (k == ends) continue;
      os << " (" << genus + ends - k << "," << k << ")";
    }
    r.note = os.str();
  }
  return r;
}

double shiohama_total_curvature(int euler_characteristic, double growth_sum) {
  return 2.0 * kPi * (euler_characteristic - growth_sum);
}

double EndSample::r() const { return std::hypot(x1, x2); }

GeneratrixSample sample_at_rho(const Generatrix& half, double rho) {
  const auto& s = half.samples;
  if (s.empty() || rho < s.front().rho || rho > s.back().rho) {
    std::ostringstream os;
    os << "radius " << rho << " outside the sampled generatrix";
    fail_config(os.str());
  }
  auto it = std::lower_bound(s.begin(), s.end(), rho, [](const GeneratrixSample& a, double v) { return a.rho < v; });
  if (it == s.begin()) return s.front();
  double lo = (it - 1)->arc, hi = it->arc;
  for (int k = 0; k < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    (sample_at_arc(half, mid).rho < rho ? lo : hi) = mid;
  }
  return sample_at_arc(half, 0.5 * (lo + hi));
}

std::vector<EndSample> rotational_end_samples(const Generatrix& half, bool top, double R0, double R1, std::size_t n_r,
                                              std::size_t n_phi) {
  if (!(R1 > R0) || !(R0 > 0.0) || n_r < 2 || n_phi < 1) fail_config("end samples need 0 < R0 < R1");
  std::vector<EndSample> out;
  out.reserve(n_r * n_phi);
  for (std::size_t i = 0; i < n_r; ++i) {
    const double r = R0 * std::pow(R1 / R0, static_cast<double>(i) / static_cast<double>(n_r - 1));
    const double z = sample_at_rho(half, r).z;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi);
      out.push_back({r * std::cos(phi), r * std::sin(phi), top ? z : -z});
    }
  }
  return out;
}

namespace {

struct LsqResult {
  Eigen::Vector4d coef;
  double rms = 0.0;
};

LsqResult end_lsq(const std::vector<EndSample>& samples, double R0, double R1) {
  std::vector<const EndSample*> pts;
  for (const auto& s : samples) {
    const double r = s.r();
    if (r >= R0 * (1 - 1e-12) && r <= R1 * (1 + 1e-12)) pts.push_back(&s);
  }
  if (pts.size() < 8) fail_numeric("annulus too thin: fewer than 8 samples");
  Eigen::MatrixXd A(pts.size(), 4);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double r = pts[i]->r();
    A(row, 0) = std::log(r);
    A(row, 1) = 1.0;
    A(row, 2) = pts[i]->x1 / (r * r);
    A(row, 3) = pts[i]->x2 / (r * r);
    b(row) = pts[i]->height;
  }
  // Column scaling keeps the conditioning test about geometry, not units.
  Eigen::Vector4d scale;
  for (int c = 0; c < 4; ++c) scale(c) = std::max(A.col(c).norm(), 1e-300);
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
  const auto& sv = svd.singularValues();
  if (!(sv(3) > 1e-10 * sv(0))) fail_numeric("annulus too thin: ill-conditioned end fit");
  LsqResult out;
  out.coef = As.colPivHouseholderQr().solve(b).cwiseQuotient(scale);
  out.rms = std::sqrt((A * out.coef - b).squaredNorm() / static_cast<double>(pts.size()));
  return out;
}

}  // namespace

EndFit fit_end_expansion(const std::vector<EndSample>& samples, double R0, double R1) {
  if (!(R0 > 0.0) || R1 < 10.0 * R0 * (1 - 1e-12)) fail_numeric("annulus too thin: need at least one decade in r");
  EndFit f;
  f.R0 = R0;
  f.R1 = R1;
  const LsqResult all = end_lsq(samples, R0, R1);
  f.beta = all.coef(0);
  f.a0 = all.coef(1);
  f.a1 = all.coef(2);
  f.a2 = all.coef(3);
  f.residual = all.rms;
  const double mid = std::sqrt(R0 * R1);
  f.beta_inner = end_lsq(samples, R0, mid).coef(0);
  f.beta_outer = end_lsq(samples, mid, R1).coef(0);
  const double tol = 0.05 * std::abs(f.beta) + 1e-12;
  f.stable = std::abs(f.beta_inner - f.beta_outer) <= tol;
  return f;
}

const char* to_string(GrowthSign s) {
  switch (s) {
    case GrowthSign::positive: return "positive";
    case GrowthSign::negative: return "negative";
    case GrowthSign::bounded: return "bounded";
    case GrowthSign::indeterminate: return "indeterminate";
  }
  return "?";
}

GrowthSignReport growth_sign_check(const std::vector<EndSample>& samples, double a0) {
  GrowthSignReport rep;
  if (samples.empty()) return rep;
  double r_min = samples.front().r(), r_max = r_min;
  for (const auto& s : samples) {
    r_min = std::min(r_min, s.r());
    r_max = std::max(r_max, s.r());
  }
  const double mid = std::sqrt(r_min * r_max);
  double inner_sup = 0.0, outer_sup = 0.0;
  rep.inf = std::numeric_limits<double>::infinity();
  rep.sup = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double h = s.height - a0;
    if (s.r() < mid) {
      inner_sup = std::max(inner_sup, std::abs(h));
    } else {
      outer_sup = std::max(outer_sup, std::abs(h));
      rep.inf = std::min(rep.inf, h);
      rep.sup = std::max(rep.sup, h);
    }
  }
  const double tol = 1e-9 * std::max(1.0, outer_sup);
  if (outer_sup <= 1.1 * inner_sup + tol) {
    rep.sign = GrowthSign::bounded;
  } else if (rep.inf >= -tol) {
    rep.sign = GrowthSign::positive;
  } else if (rep.sup <= tol) {
    rep.sign = GrowthSign::negative;
  } else {
    rep.sign = GrowthSign::indeterminate;
  }
  return rep;
}

AreaGrowth area_growth_constant(const std::function<double(double)>& area, const std::vector<double>& radii) {
  if (radii.size() < 3) fail_config("area growth needs at least three radii");
  AreaGrowth g;
  g.radii = radii;
  for (double R : radii) g.ratios.push_back(area(R) / (kPi * R * R));
  int direction = 0;
  for (std::size_t k = 1; k < g.ratios.size(); ++k) {
    const double d = g.ratios[k] - g.ratios[k - 1];
    if (std::abs(d) <= 1e-14 * std::abs(g.ratios[k])) continue;
    const int s = d > 0 ? 1 : -1;
    if (direction != 0 && s != direction) fail_numeric("inconclusive: non-monotone area ratio sequence");
    direction = s;
  }
  const std::size_t n = radii.size();
  Eigen::Matrix3d A;
  Eigen::Vector3d b;
  for (int k = 0; k < 3; ++k) {
    const double R = radii[n - 3 + static_cast<std::size_t>(k)];
    A(k, 0) = 1.0;
    A(k, 1) = std::log(R) / (R * R);
    A(k, 2) = 1.0 / (R * R);
    b(k) = g.ratios[n - 3 + static_cast<std::size_t>(k)];
  }
  g.constant = A.fullPivLu().solve(b)(0);
  return g;
}

AreaGrowth area_growth_constant(const Generatrix& half, const std::vector<double>& radii) {
  auto area = [&](double R) {
    const double arc = sample_at_rho(half, R).arc;
    // Simpson per stored interval, midpoints from the Hermite interpolant.
    std::vector<double> terms;
    const auto& s = half.samples;
    for (std::size_t i = 0; i + 1 < s.size() && s[i].arc < arc; ++i) {
      const double a = s[i].arc, b = std::min(s[i + 1].arc, arc);
      const double ra = s[i].rho;
      const double rb = b == s[i + 1].arc ? s[i + 1].rho : sample_at_arc(half, b).rho;
      const double rm = sample_at_arc(half, 0.5 * (a + b)).rho;
      terms.push_back((b - a) / 6.0 * (ra + 4.0 * rm + rb));
    }
    return 2.0 * kPi * pairwise_sum(terms);
  };
  return area_growth_constant(area, radii);
}

SecondFormBudget second_form_budget(const WeingartenProfile& p, const Generatrix& half, double arc_R, double c_bar) {
  SecondFormBudget b;
  b.c_bar = c_bar;
  const CurvatureBudget k = total_curvature(p, half, arc_R, TailMode::turning_angle);
  b.integral_K = k.total;
  auto h2_density = [](const GeneratrixSample& s) {
    const double H = s.mean_curvature();
    return 2.0 * kPi * s.rho * H * H;
  };
  double h2 = 2.0 * arc_integral(p, half.tau, 0.0, arc_R, h2_density);
  const double h2_edge = h2_density(sample_at_arc(half, arc_R));
  if (h2_edge != 0.0) h2 += 2.0 * power_tail([&](double l) { return h2_density(sample_at_arc(half, l)); }, arc_R);
  b.integral_H2 = h2;
  b.integral_II2 = 4.0 * b.integral_H2 - 2.0 * b.integral_K;
  b.lhs = (1.0 - c_bar * c_bar) * b.integral_H2;
  b.rhs = -c_bar * c_bar * b.integral_K;
  b.margin = b.rhs - b.lhs;
  // Roundoff allowance so the minimal case 0 <= 0 is not decided by noise.
  b.inequality_holds = b.lhs <= b.rhs + 1e-12 * (std::abs(b.integral_H2) + std::abs(b.integral_K));

  auto norm_II = [](const GeneratrixSample& s) { return std::hypot(s.k_meridian, s.k_parallel); };
  b.neck_II = norm_II(half.samples.front());
  for (const auto& s : half.samples)
    if (s.arc >= 0.9 * arc_R && s.arc <= arc_R) b.outer_II = std::max(b.outer_II, norm_II(s));
  return b;
}

GaussBonnet gauss_bonnet_annulus(const WeingartenProfile& p, double tau, double arc_R, std::size_t n_arc,
                                 std::size_t n_phi, Exec exec) {
  if (n_arc % 2 == 0) ++n_arc;  // Simpson in the arc direction
  const Generatrix g = sample_generatrix(p, tau, Chart::arc_length, -arc_R, arc_R, n_arc - 1, 4);
  std::vector<double> u(g.samples.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = g.samples[i].arc;

  // Only positions are kept; everything below is finite differences.
  ParametricPatch mesh;
  mesh.grid = Grid2::periodic(std::move(u), n_phi);
  mesh.X.resize(mesh.grid.size());
  for (std::size_t i = 0; i < mesh.grid.nu(); ++i) {
    const GeneratrixSample& s = g.samples[i];
    for (std::size_t j = 0; j < n_phi; ++j) {
      const double phi = mesh.grid.v[j];
      mesh.X[mesh.grid.index(i, j)] = Vec3(s.rho * std::cos(phi), s.rho * std::sin(phi), s.z);
    }
  }
  fundamental_forms(mesh, exec);
  curvatures(mesh, exec);

  const std::size_t nu = mesh.grid.nu();
  const double du = mesh.grid.du(), dv = mesh.grid.dv();
  std::vector<double> rings(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    double ring = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const std::size_t k = mesh.grid.index(i, j);
      ring += mesh.K[k] * std::sqrt(mesh.E[k] * mesh.G[k] - mesh.F[k] * mesh.F[k]);
    }
    const double w = (i == 0 || i + 1 == nu) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rings[i] = w * ring * dv;
  }
  GaussBonnet gb;
  gb.curvature_integral = pairwise_sum(rings) * du / 3.0;

  // Boundary circles: k_g = <curve acceleration, inward conormal>.
  const auto Xu = partial(mesh.grid, mesh.X, Axis::u, 2, exec);
  const auto Xv = partial(mesh.grid, mesh.X, Axis::v, 2, exec);
  const auto Xvv = partial2(mesh.grid, mesh.X, Axis::v, exec);
  for (std::size_t i : {std::size_t{0}, nu - 1}) {
    const double inward = i == 0 ? 1.0 : -1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) {
      const std::size_t k = mesh.grid.index(i, j);
      const double speed = Xv[k].norm();
      const Vec3 t = Xv[k] / speed;
      Vec3 conormal = inward * (Xu[k] - Xu[k].dot(t) * t);
      conormal.normalize();
      const Vec3 accel = (Xvv[k] - Xvv[k].dot(t) * t) / (speed * speed);
      sum += accel.dot(conormal) * speed * dv;
    }
    gb.boundary_term += sum;
  }
  gb.euler_characteristic = 0.0;
  gb.defect = std::abs(gb.curvature_integral + gb.boundary_term - 2.0 * kPi * gb.euler_characteristic);
  return gb;
}

}  // namespace eswmt
