#include "eswmt/kenmotsu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "eswmt/error.hpp"
#include "eswmt/stencil.hpp"

namespace eswmt {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

struct ZDerivatives {
  std::vector<Complex> dz, dzbar;
};

// d_z = (d_u - i d_v) / 2, d_zbar = (d_u + i d_v) / 2.
ZDerivatives z_derivatives(const Grid2& g, const std::vector<Complex>& f, int order, Exec exec) {
  const auto fu = partial(g, f, Axis::u, order, exec);
  const auto fv = partial(g, f, Axis::v, order, exec);
  ZDerivatives d;
  d.dz.resize(f.size());
  d.dzbar.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    d.dz[k] = 0.5 * (fu[k] - kI * fv[k]);
    d.dzbar[k] = 0.5 * (fu[k] + kI * fv[k]);
  }
  return d;
}

bool interior(const Grid2& g, std::size_t k) {
  const std::size_t i = k / g.nv(), j = k % g.nv();
  if (i == 0 || i + 1 == g.nu()) return false;
  if (!g.periodic_v && (j == 0 || j + 1 == g.nv())) return false;
  return true;
}

// Fourth-order integral of samples f over [x_a, x_a + h] on a line of n
// nodes; wraps when periodic.
template <class T, class Get>
T edge_integral(Get&& at, std::size_t a, std::size_t n, double h, bool periodic) {
  auto w = [&](std::ptrdiff_t k) {
    const auto nn = static_cast<std::ptrdiff_t>(n);
    return at(static_cast<std::size_t>(((k % nn) + nn) % nn));
  };
  const auto aa = static_cast<std::ptrdiff_t>(a);
  if (periodic || (a >= 1 && a + 2 < n))
    return h / 24.0 * (-w(aa - 1) + 13.0 * w(aa) + 13.0 * w(aa + 1) - w(aa + 2));
  if (a == 0) return h / 24.0 * (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3));
  return h / 24.0 * (9.0 * at(n - 1) + 19.0 * at(n - 2) - 5.0 * at(n - 3) + at(n - 4));
}

}  // namespace

Complex stereographic(const Vec3& n, ProjectionPole pole) {
  if (pole == ProjectionPole::north) return Complex(n.x(), n.y()) / (1.0 - n.z());
  return Complex(n.x(), -n.y()) / (1.0 + n.z());
}

Vec3 inverse_stereographic(Complex g, ProjectionPole pole) {
  const double m = std::norm(g);
  if (pole == ProjectionPole::north) return Vec3(2.0 * g.real(), 2.0 * g.imag(), m - 1.0) / (1.0 + m);
  return Vec3(2.0 * g.real(), -2.0 * g.imag(), 1.0 - m) / (1.0 + m);
}

std::vector<Complex> gauss_map_stereo(const ParametricPatch& patch, ProjectionPole pole) {
  if (patch.normal.size() != patch.X.size()) fail_config("gauss map needs the patch normal field");
  std::vector<Complex> out(patch.normal.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3& n = patch.normal[k];
    const double gap = pole == ProjectionPole::north ? 1.0 - n.z() : 1.0 + n.z();
    if (gap < 1e-12) {
      std::ostringstream os;
      os << "switch projection pole: normal at the " << (pole == ProjectionPole::north ? "north" : "south")
         << " pole at (u, v) = (" << patch.grid.u[k / patch.grid.nv()] << ", " << patch.grid.v[k % patch.grid.nv()]
         << ")";
      fail_numeric(os.str());
    }
    out[k] = stereographic(n, pole);
  }
  return out;
}

KenmotsuField kenmotsu_field(const ParametricPatch& patch, ProjectionPole pole) {
  if (!patch.has_curvatures()) fail_config("kenmotsu field needs curvature fields");
  if (!patch.is_conformal(1e-6)) fail_config("conformal chart required");
  KenmotsuField f;
  f.grid = patch.grid;
  f.G = gauss_map_stereo(patch, pole);
  f.H = patch.H;
  f.pole = pole;
  return f;
}

KenmotsuField rotational_kenmotsu_field(const Generatrix& conformal, std::size_t nphi, bool periodic, double phi0,
                                        double phi1) {
  if (conformal.chart != Chart::conformal) fail_config("conformal generatrix required");
  std::vector<double> u(conformal.samples.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = conformal.samples[i].sigma;
  KenmotsuField f;
  if (periodic) {
    f.grid = Grid2::periodic(std::move(u), nphi);
  } else {
    f.grid = Grid2::uniform(0.0, 1.0, u.size(), phi0, phi1, nphi);
    f.grid.u = std::move(u);
  }
  f.G.resize(f.grid.size());
  f.H.resize(f.grid.size());
  for (std::size_t i = 0; i < f.grid.nu(); ++i) {
    const GeneratrixSample& s = conformal.samples[i];
    for (std::size_t j = 0; j < f.grid.nv(); ++j) {
      const double phi = f.grid.v[j];
      const Vec3 n(-std::sin(s.theta) * std::cos(phi), -std::sin(s.theta) * std::sin(phi), std::cos(s.theta));
      f.G[f.grid.index(i, j)] = stereographic(n);
      f.H[f.grid.index(i, j)] = s.mean_curvature();
    }
  }
  return f;
}

BeltramiField beltrami_mu(const KenmotsuField& field, double rel_tol, Exec exec) {
  const ZDerivatives d = z_derivatives(field.grid, field.G, 4, exec);
  double scale = 0.0;
  for (std::size_t k = 0; k < d.dz.size(); ++k) scale = std::max({scale, std::abs(d.dz[k]), std::abs(d.dzbar[k])});
  BeltramiField out;
  out.mu.assign(d.dz.size(), Complex(0.0, 0.0));
  out.masked.assign(d.dz.size(), 0);
  for (std::size_t k = 0; k < d.dz.size(); ++k) {
    if (scale == 0.0 || std::abs(d.dz[k]) <= rel_tol * scale) {
      out.masked[k] = 1;
      ++out.masked_count;
      continue;
    }
    out.mu[k] = d.dzbar[k] / d.dz[k];
    out.sup = std::max(out.sup, std::abs(out.mu[k]));
  }
  if (10 * out.masked_count > out.mu.size()) {
    std::ostringstream os;
    os << "degenerate Gauss map chart: G_z vanishes on " << out.masked_count << " of " << out.mu.size() << " nodes";
    fail_numeric(os.str());
  }
  return out;
}

double mu_identity_residual(const BeltramiField& mu, const ParametricPatch& patch, const WeingartenProfile& p) {
  double r = 0.0;
  for (std::size_t k = 0; k < mu.mu.size(); ++k) {
    if (mu.masked[k]) continue;
    const double q = patch.q[k];
    const double expected = numerically_umbilic(q, patch.H[k]) ? 0.0 : p.eval(q) / std::sqrt(q);
    r = std::max(r, std::abs(std::abs(mu.mu[k]) - expected));
  }
  return r;
}

HopfBeltrami hopf_beltrami(const ParametricPatch& patch, const BeltramiField& from_gauss_map) {
  const HopfField hopf = hopf_differential(patch, 1e-6);
  HopfBeltrami out;
  out.mu.assign(hopf.Q.size(), Complex(0.0, 0.0));
  out.masked.assign(hopf.Q.size(), 0);
  for (std::size_t k = 0; k < hopf.Q.size(); ++k) {
    if (numerically_umbilic(patch.q[k], patch.H[k])) {
      out.masked[k] = 1;
      continue;
    }
    out.mu[k] = patch.H[k] * hopf.lambda[k] / hopf.Q[k];
    if (from_gauss_map.masked[k]) continue;
    out.discrepancy = std::max(out.discrepancy, std::abs(out.mu[k] - from_gauss_map.mu[k]));
    out.modulus_discrepancy =
        std::max(out.modulus_discrepancy, std::abs(std::abs(out.mu[k]) - std::abs(from_gauss_map.mu[k])));
  }
  return out;
}

double dilatation(double mu_sup) {
  if (!(mu_sup < 1.0)) {
    std::ostringstream os;
    os << "not quasiconformal: sup |mu| = " << mu_sup;
    fail_numeric(os.str());
  }
  return (1.0 + mu_sup) / (1.0 - mu_sup);
}

double dilatation(const BeltramiField& mu) { return dilatation(mu.sup); }

MoriReport mori_bound_check(const DiskSamples& disk, std::size_t pairs, std::uint64_t seed) {
  MoriReport r;
  r.gamma = dilatation(disk.mu_sup);
  const std::size_t n = disk.w.size();
  if (n < 2) return r;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < pairs; ++k) {
    const std::size_t a = pick(rng), b = pick(rng);
    const double dw = std::abs(disk.w[a] - disk.w[b]);
    if (dw == 0.0) continue;
    const double ratio = std::abs(disk.g[a] - disk.g[b]) / (16.0 * std::pow(dw, 1.0 / r.gamma));
    r.worst_ratio = std::max(r.worst_ratio, ratio);
    if (ratio > 1.0) ++r.violations;
    ++r.pairs;
  }
  return r;
}

namespace {

DiskSamples polar_disk(std::size_t n_r, std::size_t n_phi, const std::function<Complex(Complex)>& g) {
  DiskSamples d;
  d.w.push_back(0.0);
  d.g.push_back(g(0.0));
  for (std::size_t i = 1; i <= n_r; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(n_r);
    for (std::size_t j = 0; j < n_phi; ++j) {
      const Complex w = std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n_phi));
      d.w.push_back(w);
      d.g.push_back(g(w));
    }
  }
  return d;
}

}  // namespace

DiskSamples conformal_disk_samples(std::size_t n_r, std::size_t n_phi) {
  return polar_disk(n_r, n_phi, [](Complex w) { return w; });
}

DiskSamples affine_disk_samples(double k, std::size_t n_r, std::size_t n_phi) {
  if (!(std::abs(k) < 1.0)) fail_config("affine disk map needs |k| < 1");
  DiskSamples d = polar_disk(n_r, n_phi, [k](Complex w) { return (w + k * std::conj(w)) / (1.0 + k); });
  d.mu_sup = std::abs(k);
  return d;
}

DiskSamples rotational_end_disk(const Generatrix& conformal, double sigma0, std::size_t nphi) {
  if (conformal.chart != Chart::conformal) fail_config("conformal generatrix required");
  Generatrix tail;
  tail.chart = Chart::conformal;
  tail.tau = conformal.tau;
  for (const auto& s : conformal.samples)
    if (s.sigma >= sigma0 - 1e-12) tail.samples.push_back(s);
  if (tail.samples.size() < 6) fail_config("end disk needs at least 6 samples beyond sigma0");

  KenmotsuField field = rotational_kenmotsu_field(tail, nphi);
  for (auto& g : field.G) g = 1.0 / g;  // south chart, same Beltrami coefficient
  field.pole = ProjectionPole::south;
  const BeltramiField mu = beltrami_mu(field);

  DiskSamples d;
  d.mu_sup = mu.sup;
  d.w.push_back(0.0);
  d.g.push_back(0.0);  // the end itself: theta -> 0
  for (std::size_t i = 0; i < field.grid.nu(); ++i) {
    const double r = std::exp(-(field.grid.u[i] - sigma0));
    for (std::size_t j = 0; j < field.grid.nv(); ++j) {
      d.w.push_back(std::polar(r, -field.grid.v[j]));
      d.g.push_back(field.G[field.grid.index(i, j)]);
    }
  }
  return d;
}

IntegrabilityResidual integrability_residual(const KenmotsuField& field, Exec exec) {
  const Grid2& g = field.grid;
  const ZDerivatives d = z_derivatives(g, field.G, 2, exec);
  const auto guu = partial2(g, field.G, Axis::u, exec);
  const auto gvv = partial2(g, field.G, Axis::v, exec);
  const auto hu = partial(g, field.H, Axis::u, 2, exec);
  const auto hv = partial(g, field.H, Axis::v, 2, exec);

  IntegrabilityResidual out;
  out.values.resize(field.G.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(field.G.size()), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const Complex G = field.G[k];
    const Complex gzzbar = 0.25 * (guu[k] + gvv[k]);
    const Complex hz = 0.5 * Complex(hu[k], -hv[k]);
    const Complex lhs = field.H[k] * (gzzbar - 2.0 * std::conj(G) * d.dz[k] * d.dzbar[k] / (1.0 + std::norm(G)));
    out.values[k] = lhs - hz * d.dzbar[k];
  });
  std::vector<double> sq;
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (!interior(g, k)) continue;
    const double a = std::abs(out.values[k]);
    out.sup = std::max(out.sup, a);
    sq.push_back(a * a);
  }
  if (!sq.empty()) out.l2 = std::sqrt(pairwise_sum(sq) / static_cast<double>(sq.size()));
  return out;
}

ParametricPatch recover_immersion(const KenmotsuField& field, const Vec3& basepoint, Exec exec) {
  const Grid2& g = field.grid;
  double hmax = 0.0;
  for (double h : field.H) hmax = std::max(hmax, std::abs(h));
  const double floor = 1e-10 * std::max(1.0, hmax);
  for (std::size_t k = 0; k < field.H.size(); ++k) {
    if (!(std::abs(field.H[k]) > floor)) fail_config("mean curvature vanishes: Kenmotsu recovery undefined");
  }
  if (g.nu() < 5 || g.nv() < 5) fail_config("recovery needs at least 5 x 5 nodes");

  // d_z X = -(1/H) conj(G_zbar) xi(G); X_u = 2 Re d_z X, X_v = -2 Im d_z X.
  const ZDerivatives d = z_derivatives(g, field.G, 4, exec);
  std::vector<Vec3> xu(g.size()), xv(g.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(g.size()), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const Complex G = field.G[k];
    const double den = (1.0 + std::norm(G)) * (1.0 + std::norm(G));
    const Complex c = -std::conj(d.dzbar[k]) / (field.H[k] * den);
    const Complex p1 = c * (1.0 - G * G), p2 = c * kI * (1.0 + G * G), p3 = c * 2.0 * G;
    xu[k] = 2.0 * Vec3(p1.real(), p2.real(), p3.real());
    xv[k] = -2.0 * Vec3(p1.imag(), p2.imag(), p3.imag());
  });

  const double hu = g.du(), hv = g.dv();
  ParametricPatch out;
  out.grid = g;
  out.X.assign(g.size(), Vec3::Zero());
  out.X[0] = basepoint;
  for (std::size_t i = 0; i + 1 < g.nu(); ++i)
    out.X[g.index(i + 1, 0)] =
        out.X[g.index(i, 0)] + edge_integral<Vec3>([&](std::size_t a) { return xu[g.index(a, 0)]; }, i, g.nu(), hu, false);
  for_each_index(exec, static_cast<std::ptrdiff_t>(g.nu()), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = 0; j + 1 < g.nv(); ++j)
      out.X[g.index(i, j + 1)] =
          out.X[g.index(i, j)] +
          edge_integral<Vec3>([&](std::size_t b) { return xv[g.index(i, b)]; }, j, g.nv(), hv, g.periodic_v);
  });
  return out;
}

RoundTrip kenmotsu_roundtrip(const WeingartenProfile& p, double tau, double l1, double l2, std::size_t n_sigma,
                             std::size_t n_phi, Exec exec) {
  if (!(l2 > l1) || l1 < 0.0) fail_config("kenmotsu band needs 0 <= l1 < l2");
  const Generatrix arc = integrate_generatrix(p, tau, l2);
  const double s1 = sample_at_arc(arc, l1).sigma;
  const double s2 = arc.samples.back().sigma;
  const Generatrix band = sample_generatrix(p, tau, Chart::conformal, s1, s2, n_sigma - 1, 8);
  const ParametricPatch original = revolve(band, n_phi, exec);
  const KenmotsuField field = kenmotsu_field(original);
  const ParametricPatch recovered = recover_immersion(field, Vec3::Zero(), exec);
  const RigidAlignment fit = align_rigid(recovered.X, original.X);

  RoundTrip r;
  r.max_alignment_error = fit.max_distance;
  r.hausdorff = hausdorff_distance(fit.aligned, original.X);
  r.integrability_sup = integrability_residual(field, exec).sup;
  const BeltramiField mu = beltrami_mu(field, 1e-8, exec);
  r.mu_sup = mu.sup;
  r.dilatation = dilatation(mu);
  r.mu_identity = mu_identity_residual(mu, original, p);
  r.hopf_discrepancy = hopf_beltrami(original, mu).discrepancy;
  r.nodes = original.X.size();
  return r;
}

}  // namespace eswmt
