#include "eswmt/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eswmt/error.hpp"

namespace eswmt {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

using Phi3 = std::array<Complex, 3>;

Phi3 operator+(const Phi3& a, const Phi3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Phi3 operator-(const Phi3& a, const Phi3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Phi3 operator*(Complex s, const Phi3& a) { return {s * a[0], s * a[1], s * a[2]}; }

double norm1(const Phi3& a) { return std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]); }
bool finite(const Phi3& a) {
  for (const auto& c : a)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

Vec3 real_part(const Phi3& a) { return {a[0].real(), a[1].real(), a[2].real()}; }

Phi3 phi_direct(const WeierstrassData& d, Complex z) {
  const Complex h = d.h(z);
  const Complex g = d.G(z);
  return {0.5 * h * (1.0 - g * g), 0.5 * kI * h * (1.0 + g * g), h * g};
}

int zero_order_at(const WeierstrassData& d, Complex z) {
  for (const auto& zero : d.zeros_of_h)
    if (std::abs(zero.location - z) < 1e-12) return zero.order;
  return 0;
}

// Gauss-Legendre on a complex-valued integrand over t in [0, 1], bisected
// until two levels agree.
class SegmentIntegrator {
 public:
  template <class Fn>
  Phi3 integrate(Fn&& fn) const {
    return refine(fn, 0.0, 1.0, panel(fn, 0.0, 1.0), 0);
  }

 private:
  using Rule = boost::math::quadrature::gauss<double, 10>;
  static constexpr int kMaxDepth = 30;

  template <class Fn>
  static Phi3 panel(Fn& fn, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    Phi3 s{};
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t k = 0; k < x.size(); ++k) {
      s = s + Complex(w[k] * r) * (fn(c + r * x[k]) + fn(c - r * x[k]));
    }
    return s;
  }

  template <class Fn>
  static Phi3 refine(Fn& fn, double a, double b, const Phi3& whole, int depth) {
    const double m = 0.5 * (a + b);
    const Phi3 left = panel(fn, a, m);
    const Phi3 right = panel(fn, m, b);
    const Phi3 sum = left + right;
    if (!finite(sum)) fail_numeric("path through singularity");
    const double err = norm1(sum - whole);
    if (err <= 1e-14 * std::max(1.0, norm1(sum))) return sum;
    if (depth >= kMaxDepth) fail_numeric("path through singularity");
    return refine(fn, a, m, left, depth + 1) + refine(fn, m, b, right, depth + 1);
  }
};

// int Phi(z) dz along the image of the straight segment wa -> wb under the chart.
Phi3 chart_segment(const WeierstrassData& d, const ComplexGrid& cg, Complex wa, Complex wb) {
  const Complex dw = wb - wa;
  auto fn = [&](double t) {
    const Complex w = wa + t * dw;
    return (cg.dz_dw(w.real(), w.imag()) * dw) * make_phi(d, cg.z(w.real(), w.imag()));
  };
  return SegmentIntegrator{}.integrate(fn);
}

Phi3 z_segment(const WeierstrassData& d, Complex za, Complex zb) {
  const Complex dz = zb - za;
  auto fn = [&](double t) { return dz * make_phi(d, za + t * dz); };
  return SegmentIntegrator{}.integrate(fn);
}

}  // namespace

WeierstrassData enneper_data() {
  WeierstrassData d;
  d.name = "enneper";
  d.h = [](Complex) { return Complex(1.0, 0.0); };
  d.G = [](Complex z) { return z; };
  d.dG = [](Complex) { return Complex(1.0, 0.0); };
  return d;
}

WeierstrassData catenoid_data() {
  WeierstrassData d;
  d.name = "catenoid";
  d.h = [](Complex z) { return 1.0 / (z * z); };
  d.G = [](Complex z) { return z; };
  d.dG = [](Complex) { return Complex(1.0, 0.0); };
  d.punctures = {Complex(0.0, 0.0)};
  return d;
}

WeierstrassData helicoid_associate_data() {
  WeierstrassData d = catenoid_data();
  d.name = "helicoid-assoc";
  d.h = [](Complex z) { return kI / (z * z); };
  return d;
}

WeierstrassData plane_data(Complex g0) {
  WeierstrassData d;
  d.name = "plane";
  d.h = [](Complex) { return Complex(1.0, 0.0); };
  d.G = [g0](Complex) { return g0; };
  d.dG = [](Complex) { return Complex(0.0, 0.0); };
  return d;
}

WeierstrassData weierstrass_preset(const std::string& name) {
  if (name == "enneper") return enneper_data();
  if (name == "catenoid") return catenoid_data();
  if (name == "helicoid-assoc") return helicoid_associate_data();
  if (name == "plane") return plane_data();
  fail_config("unknown weierstrass preset '" + name + "' (valid: enneper, catenoid, helicoid-assoc, plane)");
}

WeierstrassData monomial_data(Complex hc, int hm, Complex gc, int gm) {
  if (hc == 0.0 || gc == 0.0) fail_config("monomial data needs nonzero coefficients");
  WeierstrassData d;
  std::ostringstream os;
  os << "custom(h = " << hc << " z^" << hm << ", G = " << gc << " z^" << gm << ")";
  d.name = os.str();
  d.h = [hc, hm](Complex z) { return hc * std::pow(z, hm); };
  d.G = [gc, gm](Complex z) { return gc * std::pow(z, gm); };
  d.dG = [gc, gm](Complex z) { return gm == 0 ? Complex(0.0, 0.0) : gc * static_cast<double>(gm) * std::pow(z, gm - 1); };
  const Complex origin(0.0, 0.0);
  if (hm > 0) d.zeros_of_h.push_back({origin, hm});
  if (gm < 0) d.poles_of_G.push_back({origin, -gm});
  if (hm < 0) d.punctures.push_back(origin);
  return d;
}

Phi make_phi(const WeierstrassData& data, Complex z) {
  for (const auto& pole : data.poles_of_G) {
    if (std::abs(z - pole.location) > 1e-8) continue;
    if (zero_order_at(data, pole.location) < 2 * pole.order) fail_numeric("irregular point");
    // Removable: Phi is holomorphic here, so its mean over a small circle is
    // the centre value (exact through degree 15 of the Taylor series).
    constexpr int n = 16;
    constexpr double r = 1e-3;
    Phi3 mean{};
    for (int k = 0; k < n; ++k) {
      const Complex w = pole.location + std::polar(r, 2.0 * kPi * k / n);
      mean = mean + Complex(1.0 / n) * phi_direct(data, w);
    }
    return mean;
  }
  const Phi3 phi = phi_direct(data, z);
  if (!finite(phi)) {
    const Complex g = data.G(z);
    if (!std::isfinite(std::abs(g))) fail_numeric("irregular point");
  }
  return phi;
}

double null_defect(const Phi& phi) {
  const double scale = std::norm(phi[0]) + std::norm(phi[1]) + std::norm(phi[2]);
  if (scale == 0.0) return 0.0;
  return std::abs(phi[0] * phi[0] + phi[1] * phi[1] + phi[2] * phi[2]) / scale;
}

RegularityReport regularity_check(const WeierstrassData& data) {
  RegularityReport r;
  std::ostringstream why;
  for (const auto& pole : data.poles_of_G) {
    const int k = zero_order_at(data, pole.location);
    if (k < 2 * pole.order) {
      r.irregular_points.push_back(pole.location);
      why << "pole of G of order " << pole.order << " at " << pole.location << " meets a zero of h of order " << k
          << " < " << 2 * pole.order << "; ";
    } else if (k > 2 * pole.order) {
      r.branch_points.push_back(pole.location);
      why << "branch point at " << pole.location << " (zero order " << k << " > " << 2 * pole.order << "); ";
    }
  }
  for (const auto& zero : data.zeros_of_h) {
    const bool at_pole = std::any_of(data.poles_of_G.begin(), data.poles_of_G.end(), [&](const SingularPoint& p) {
      return std::abs(p.location - zero.location) < 1e-12;
    });
    if (!at_pole) {
      r.branch_points.push_back(zero.location);
      why << "branch point at " << zero.location << " (zero of h where G is finite); ";
    }
  }
  r.regular = r.irregular_points.empty() && r.branch_points.empty();
  std::ostringstream s;
  s << (r.regular ? "regular on C" : "not regular on C");
  if (!data.punctures.empty()) {
    s << " \\ {";
    for (std::size_t i = 0; i < data.punctures.size(); ++i) {
      if (i) s << ", ";
      const Complex p = data.punctures[i];
      if (p.imag() == 0.0) s << p.real();
      else s << p;
    }
    s << "}";
  }
  if (!r.regular) s << ": " << why.str();
  r.summary = s.str();
  return r;
}

ComplexGrid ComplexGrid::rectangle(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny) {
  ComplexGrid g;
  g.kind = ChartKind::cartesian;
  g.u0 = x0;
  g.u1 = x1;
  g.v0 = y0;
  g.v1 = y1;
  g.nu = nx;
  g.nv = ny;
  return g;
}

ComplexGrid ComplexGrid::annulus(double r_inner, double r_outer, std::size_t nr, std::size_t nphi) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) fail_config("annulus needs 0 < r_inner < r_outer");
  ComplexGrid g;
  g.kind = ChartKind::polar;
  g.u0 = std::log(r_inner);
  g.u1 = std::log(r_outer);
  g.v0 = 0.0;
  g.v1 = 2.0 * kPi;
  g.nu = nr;
  g.nv = nphi;
  return g;
}

Grid2 ComplexGrid::grid() const {
  if (kind == ChartKind::polar) return Grid2::periodic(u0, u1, nu, nv);
  return Grid2::uniform(u0, u1, nu, v0, v1, nv);
}

Complex ComplexGrid::z(double u, double v) const {
  if (kind == ChartKind::polar) return std::exp(Complex(u, v));
  return {u, v};
}

Complex ComplexGrid::dz_dw(double u, double v) const {
  if (kind == ChartKind::polar) return std::exp(Complex(u, v));
  return {1.0, 0.0};
}

ImmersionResult integrate_immersion(const WeierstrassData& data, Complex basepoint, const ComplexGrid& cg, Exec exec) {
  const Grid2 grid = cg.grid();
  const std::size_t nu = grid.nu();
  const std::size_t nv = grid.nv();
  const bool periodic = grid.periodic_v;
  const std::size_t nv_edges = periodic ? nv : nv - 1;
  auto node = [&](std::size_t i, std::size_t j) {
    const double v = (periodic && j == nv) ? grid.v[0] + 2.0 * kPi : grid.v[j];
    return Complex(grid.u[i], v);
  };

  // Edge integrals: eu along u from (i, j), ev along v from (i, j).
  std::vector<Phi3> eu((nu - 1) * nv), ev(nu * nv_edges);
  for_each_index(exec, static_cast<std::ptrdiff_t>(eu.size()), [&](std::ptrdiff_t k) {
    const std::size_t i = static_cast<std::size_t>(k) / nv, j = static_cast<std::size_t>(k) % nv;
    eu[static_cast<std::size_t>(k)] = chart_segment(data, cg, node(i, j), node(i + 1, j));
  });
  for_each_index(exec, static_cast<std::ptrdiff_t>(ev.size()), [&](std::ptrdiff_t k) {
    const std::size_t i = static_cast<std::size_t>(k) / nv_edges, j = static_cast<std::size_t>(k) % nv_edges;
    ev[static_cast<std::size_t>(k)] = chart_segment(data, cg, node(i, j), node(i, j + 1));
  });
  auto EU = [&](std::size_t i, std::size_t j) -> const Phi3& { return eu[i * nv + j]; };
  auto EV = [&](std::size_t i, std::size_t j) -> const Phi3& { return ev[i * nv_edges + j]; };

  const Complex z00 = cg.z(grid.u[0], grid.v[0]);
  const Phi3 origin = z_segment(data, basepoint, z00);

  // Row-first: down the first column, then along each row.
  std::vector<Phi3> a(grid.size()), b(grid.size());
  a[0] = origin;
  for (std::size_t i = 1; i < nu; ++i) a[grid.index(i, 0)] = a[grid.index(i - 1, 0)] + EU(i - 1, 0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(nu), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 1; j < nv; ++j) a[grid.index(i, j)] = a[grid.index(i, j - 1)] + EV(i, j - 1);
  });
  // Column-first.
  b[0] = origin;
  for (std::size_t j = 1; j < nv; ++j) b[grid.index(0, j)] = b[grid.index(0, j - 1)] + EV(0, j - 1);
  for_each_index(exec, static_cast<std::ptrdiff_t>(nv), [&](std::ptrdiff_t jj) {
    const auto j = static_cast<std::size_t>(jj);
    for (std::size_t i = 1; i < nu; ++i) b[grid.index(i, j)] = b[grid.index(i - 1, j)] + EU(i - 1, j);
  });

  ImmersionResult out;
  out.patch.grid = grid;
  out.patch.X.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.patch.X[k] = real_part(a[k]);
    out.path_discrepancy = std::max(out.path_discrepancy, (real_part(a[k]) - real_part(b[k])).norm());
  }

  if (periodic) {
    std::vector<Vec3> periods(nu);
    for (std::size_t i = 0; i < nu; ++i) {
      Phi3 loop{};
      for (std::size_t j = 0; j < nv_edges; ++j) loop = loop + EV(i, j);
      periods[i] = real_part(loop);
    }
    const Vec3 core = periods[nu / 2];
    out.period = core;
    for (const auto& p : periods) out.period_spread = std::max(out.period_spread, (p - core).norm());
  }
  return out;
}

MetricCurvature metric_curvature(const WeierstrassData& data, double r_inner, double r_outer, std::size_t n_r,
                                 std::size_t n_phi, Exec exec, bool tails) {
  if (!(r_inner >= 0.0) || !(r_outer > r_inner)) fail_config("metric_curvature needs 0 <= r_inner < r_outer");
  MetricCurvature out;
  out.grid = Grid2::periodic(r_inner, r_outer, n_r, n_phi);
  out.lambda.resize(out.grid.size());
  out.K.resize(out.grid.size());

  // K lambda_hat written without |h| so zeros of h do not produce 0/0.
  auto density = [&](Complex z) {
    const double g2 = std::norm(data.G(z));
    return -4.0 * std::norm(data.dG(z)) / ((1.0 + g2) * (1.0 + g2));
  };
  for_each_index(exec, static_cast<std::ptrdiff_t>(out.grid.size()), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const std::size_t i = k / n_phi, j = k % n_phi;
    const Complex z = std::polar(out.grid.u[i], out.grid.v[j]);
    const double g2 = std::norm(data.G(z));
    const double s = std::abs(data.h(z)) * (1.0 + g2) / 2.0;
    out.lambda[k] = s * s;
    out.K[k] = density(z) / out.lambda[k];
  });

  // Ring density: int_0^{2 pi} K lambda_hat r d phi, trapezoid (spectral for
  // smooth periodic integrands).
  auto ring = [&](double r) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_phi; ++j) s += density(std::polar(r, 2.0 * kPi * j / n_phi));
    return s * r * 2.0 * kPi / static_cast<double>(n_phi);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  if (r_inner > 0.0) {
    out.quadrature = GK::integrate([&](double s) { const double r = std::exp(s); return ring(r) * r; },
                                   std::log(r_inner), std::log(r_outer), 20, 1e-12, &err);
  } else {
    const double split = std::min(1.0, r_outer);
    out.quadrature = GK::integrate(ring, 0.0, split, 20, 1e-12, &err);
    if (r_outer > split)
      out.quadrature += GK::integrate([&](double s) { const double r = std::exp(s); return ring(r) * r; }, 0.0,
                                      std::log(r_outer), 20, 1e-12, &err);
  }

  if (!tails) return out;

  // Outer tail: ring(r) ~ C r^-p fitted on R/4, R/2, R.
  auto exponent = [&](double r1, double r2) {
    const double w1 = ring(r1), w2 = ring(r2);
    if (w1 == 0.0 && w2 == 0.0) return std::numeric_limits<double>::infinity();
    if (w1 == 0.0 || w2 == 0.0 || (w1 > 0) != (w2 > 0)) fail_numeric("tail fit failed");
    return std::log(w2 / w1) / std::log(r2 / r1);
  };
  const double R = r_outer;
  const double s_far = exponent(R / 2.0, R);
  if (std::isinf(s_far)) {
    out.decay_exponent = std::numeric_limits<double>::infinity();
  } else {
    const double s_near = exponent(R / 4.0, R / 2.0);
    out.decay_exponent = -s_far;
    if (!(out.decay_exponent > 1.0) || std::abs(s_far - s_near) > 0.05 * std::max(1.0, std::abs(s_far)))
      fail_numeric("tail fit failed");
    out.outer_tail = ring(R) * R / (out.decay_exponent - 1.0);
  }

  // Inner tail: ring(r) ~ C r^s on (0, r_inner).
  if (r_inner > 0.0) {
    const double s_in = exponent(r_inner, 2.0 * r_inner);
    if (!std::isinf(s_in)) {
      const double s_next = exponent(2.0 * r_inner, 4.0 * r_inner);
      if (!(s_in > -1.0) || std::abs(s_in - s_next) > 0.05 * std::max(1.0, std::abs(s_in)))
        fail_numeric("tail fit failed");
      out.inner_tail = ring(r_inner) * r_inner / (s_in + 1.0);
    }
  }
  return out;
}

}  // namespace eswmt
