#include "eswmt/codazzi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eswmt/error.hpp"
#include "eswmt/stencil.hpp"

namespace eswmt {

namespace {

constexpr double kSeriesCutoff = 1e-6;

struct PairCoefficients {
  double phi, c_metric, s_metric, c_form, s_form;  // I_f = c_metric I + s_metric II, II_f = c_form I + s_form II
};

PairCoefficients pair_coefficients(const WeingartenProfile& p, double H, double q) {
  const double r = std::sqrt(q);
  const double phi = adapted_phi(p, r);
  const double ch = std::cosh(phi);
  const double s = sinh_phi_over_r(p, r);
  return {phi, ch - H * s, s, -H * ch + q * s, ch};
}

// Three-point derivative on a uniform line (second order, one-sided at ends).
std::vector<double> derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = detail::first_derivative<double>([&](std::size_t k) { return f[k]; }, i, n, h, false, 2);
  return d;
}

double uniform_parameter_step(const Generatrix& g) {
  const std::size_t n = g.samples.size();
  const double h = (g.parameter(n - 1) - g.parameter(0)) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(g.parameter(i) - g.parameter(i - 1) - h) > 1e-9 * std::abs(h))
      fail_config("rotational Simons test needs uniformly spaced samples");
  return h;
}

}  // namespace

double sinh_phi_over_r(const WeingartenProfile& p, double r) {
  if (r >= kSeriesCutoff) return std::sinh(adapted_phi(p, r)) / r;
  // P / r is smooth at 0 with limit 2 f'(0); sinh P / r = (P/r)(1 + P^2/6 + P^4/120 + P^6/5040).
  double ratio;
  if (r > 0.0) {
    ratio = adapted_phi(p, r) / r;
  } else {
    const double t = 1e-16;
    ratio = 2.0 * p.eval(t) / t;
  }
  const double P2 = ratio * r * ratio * r;
  return ratio * (1.0 + P2 / 6.0 * (1.0 + P2 / 20.0 * (1.0 + P2 / 42.0)));
}

AdaptedPair adapted_pair(const ParametricPatch& patch, const WeingartenProfile& p, Exec exec) {
  if (!patch.has_curvatures()) fail_config("adapted pair needs curvature fields");
  AdaptedPair pair;
  pair.grid = patch.grid;
  const std::size_t n = patch.X.size();
  pair.phi.resize(n);
  pair.E.resize(n); pair.F.resize(n); pair.G.resize(n);
  pair.L.resize(n); pair.M.resize(n); pair.N.resize(n);
  pair.q = patch.q;
  pair.umbilic.resize(n);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double H = patch.H[k], q = patch.q[k];
    if (numerically_umbilic(q, H)) {
      pair.umbilic[k] = 1;
      pair.phi[k] = 0.0;
      pair.E[k] = patch.E[k]; pair.F[k] = patch.F[k]; pair.G[k] = patch.G[k];
      pair.L[k] = 0.0; pair.M[k] = 0.0; pair.N[k] = 0.0;
      return;
    }
    const PairCoefficients c = pair_coefficients(p, H, q);
    pair.phi[k] = c.phi;
    pair.E[k] = c.c_metric * patch.E[k] + c.s_metric * patch.L[k];
    pair.F[k] = c.c_metric * patch.F[k] + c.s_metric * patch.M[k];
    pair.G[k] = c.c_metric * patch.G[k] + c.s_metric * patch.Nn[k];
    pair.L[k] = c.c_form * patch.E[k] + c.s_form * patch.L[k];
    pair.M[k] = c.c_form * patch.F[k] + c.s_form * patch.M[k];
    pair.N[k] = c.c_form * patch.G[k] + c.s_form * patch.Nn[k];
  });
  return pair;
}

PairInvariants pair_invariants(const AdaptedPair& pair, Exec exec) {
  const std::size_t n = pair.E.size();
  PairInvariants out;
  out.H_f.resize(n);
  out.K_f.resize(n);
  out.q_f.resize(n);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double det_i = pair.E[k] * pair.G[k] - pair.F[k] * pair.F[k];
    const double det_ii = pair.L[k] * pair.N[k] - pair.M[k] * pair.M[k];
    out.H_f[k] = (pair.E[k] * pair.N[k] - 2.0 * pair.F[k] * pair.M[k] + pair.G[k] * pair.L[k]) / (2.0 * det_i);
    out.K_f[k] = det_ii / det_i;
    out.q_f[k] = out.H_f[k] * out.H_f[k] - out.K_f[k];
  });
  for (std::size_t k = 0; k < n; ++k) {
    out.sup_mean = std::max(out.sup_mean, std::abs(out.H_f[k]));
    out.sup_gauss = std::max(out.sup_gauss, std::abs(out.K_f[k] + pair.q[k]));
    out.sup_skew = std::max(out.sup_skew, std::abs(out.q_f[k] - pair.q[k]));
    const bool pair_umbilic = numerically_umbilic(std::max(out.q_f[k], 0.0), out.H_f[k]);
    if (pair_umbilic != static_cast<bool>(pair.umbilic[k])) ++out.mask_mismatch;
  }
  return out;
}

std::vector<double> intrinsic_curvature(const Grid2& grid, const std::vector<double>& E, const std::vector<double>& F,
                                        const std::vector<double>& G, Exec exec) {
  const std::size_t n = E.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!(E[k] * G[k] - F[k] * F[k] > 0.0) || !(E[k] > 0.0)) {
      std::ostringstream os;
      os << "degenerate metric at (u, v) = (" << grid.u[k / grid.nv()] << ", " << grid.v[k % grid.nv()] << ")";
      fail_numeric(os.str());
    }
  }
  const auto Eu = partial(grid, E, Axis::u, 2, exec), Ev = partial(grid, E, Axis::v, 2, exec);
  const auto Fu = partial(grid, F, Axis::u, 2, exec), Fv = partial(grid, F, Axis::v, 2, exec);
  const auto Gu = partial(grid, G, Axis::u, 2, exec), Gv = partial(grid, G, Axis::v, 2, exec);
  const auto Evv = partial2(grid, E, Axis::v, exec);
  const auto Guu = partial2(grid, G, Axis::u, exec);
  const auto Fuv = partial(grid, Fu, Axis::v, 2, exec);

  std::vector<double> K(n);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    Eigen::Matrix3d a, b;
    a << -0.5 * Evv[k] + Fuv[k] - 0.5 * Guu[k], 0.5 * Eu[k], Fu[k] - 0.5 * Ev[k],
         Fv[k] - 0.5 * Gu[k], E[k], F[k],
         0.5 * Gv[k], F[k], G[k];
    b << 0.0, 0.5 * Ev[k], 0.5 * Gu[k],
         0.5 * Ev[k], E[k], F[k],
         0.5 * Gu[k], F[k], G[k];
    const double det = E[k] * G[k] - F[k] * F[k];
    K[k] = (a.determinant() - b.determinant()) / (det * det);
  });
  return K;
}

double comparability_constant(const AdaptedPair& pair) {
  double m = 0.0;
  for (double p : pair.phi) m = std::max(m, std::abs(p));
  return std::exp(2.0 * m);
}

SimonsResidual simons_residual(const AdaptedPair& pair, std::size_t mask_radius, Exec exec) {
  const Grid2& g = pair.grid;
  const std::size_t n = pair.E.size();
  std::size_t umbilic = 0;
  for (auto m : pair.umbilic) umbilic += m;
  if (2 * umbilic > n) {
    std::ostringstream os;
    os << "Simons test inapplicable: " << umbilic << " of " << n << " nodes are umbilic";
    fail_numeric(os.str());
  }

  // Excluded: umbilic neighbourhoods and non-periodic edges.
  std::vector<std::uint8_t> excluded(n, 0);
  const auto r = static_cast<std::ptrdiff_t>(mask_radius);
  const auto nu = static_cast<std::ptrdiff_t>(g.nu()), nv = static_cast<std::ptrdiff_t>(g.nv());
  for (std::ptrdiff_t i = 0; i < nu; ++i) {
    for (std::ptrdiff_t j = 0; j < nv; ++j) {
      const auto k = g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (i < r || i >= nu - r || (!g.periodic_v && (j < r || j >= nv - r))) excluded[k] = 1;
      if (!pair.umbilic[k]) continue;
      for (std::ptrdiff_t di = -r; di <= r; ++di) {
        for (std::ptrdiff_t dj = -r; dj <= r; ++dj) {
          const std::ptrdiff_t a = i + di;
          std::ptrdiff_t b = j + dj;
          if (a < 0 || a >= nu) continue;
          if (g.periodic_v) b = (b % nv + nv) % nv;
          else if (b < 0 || b >= nv) continue;
          excluded[g.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b))] = 1;
        }
      }
    }
  }

  // ln|II_f| = ln(2 q) / 2; umbilic nodes get a placeholder that only feeds
  // excluded stencils.
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = pair.umbilic[k] ? 0.0 : 0.5 * std::log(2.0 * pair.q[k]);

  const auto wu = partial(g, w, Axis::u, 2, exec), wv = partial(g, w, Axis::v, 2, exec);
  std::vector<double> fu(n), fv(n), root(n);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const double det = pair.E[k] * pair.G[k] - pair.F[k] * pair.F[k];
    root[k] = std::sqrt(det);
    // sqrt(det) g^{ij} d_j w
    fu[k] = (pair.G[k] * wu[k] - pair.F[k] * wv[k]) / root[k];
    fv[k] = (-pair.F[k] * wu[k] + pair.E[k] * wv[k]) / root[k];
  });
  const auto div_u = partial(g, fu, Axis::u, 2, exec), div_v = partial(g, fv, Axis::v, 2, exec);
  const auto K = intrinsic_curvature(g, pair.E, pair.F, pair.G, exec);

  SimonsResidual out;
  out.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> sq;
  for (std::size_t k = 0; k < n; ++k) {
    if (excluded[k]) {
      ++out.excluded;
      continue;
    }
    const double lap = (div_u[k] + div_v[k]) / root[k];
    out.values[k] = lap - 2.0 * K[k];
    out.sup = std::max(out.sup, std::abs(out.values[k]));
    out.intrinsic_vs_extrinsic = std::max(out.intrinsic_vs_extrinsic, std::abs(K[k] + pair.q[k]));
    sq.push_back(out.values[k] * out.values[k]);
    ++out.used;
  }
  if (!sq.empty()) out.l2 = std::sqrt(pairwise_sum(sq) / static_cast<double>(sq.size()));
  return out;
}

RotationalSimons rotational_simons(const Generatrix& g, const WeingartenProfile& p, std::size_t edge_skip) {
  const std::size_t n = g.samples.size();
  if (n < 2 * edge_skip + 3) fail_config("rotational Simons test needs more samples");
  const double h = uniform_parameter_step(g);

  std::vector<double> a(n), b(n), w(n), Lf(n), Nf(n), q(n);
  std::vector<std::uint8_t> umbilic(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const GeneratrixSample& s = g.samples[i];
    const double speed = g.speed(i);
    const double H = s.mean_curvature();
    q[i] = s.skew_curvature();
    if (numerically_umbilic(q[i], H)) {
      umbilic[i] = 1;
      a[i] = speed;
      b[i] = s.rho;
      w[i] = 0.0;
      continue;
    }
    const PairCoefficients c = pair_coefficients(p, H, q[i]);
    const double E = speed * speed, G = s.rho * s.rho;
    const double L = s.k_meridian * E, N = s.k_parallel * G;
    a[i] = std::sqrt(c.c_metric * E + c.s_metric * L);
    b[i] = std::sqrt(c.c_metric * G + c.s_metric * N);
    Lf[i] = c.c_form * E + c.s_form * L;
    Nf[i] = c.c_form * G + c.s_form * N;
    w[i] = 0.5 * std::log(2.0 * q[i]);
  }
  std::size_t n_umbilic = 0;
  for (auto m : umbilic) n_umbilic += m;
  if (2 * n_umbilic > n) fail_numeric("Simons test inapplicable: generatrix mostly umbilic");

  const auto dw = derivative(w, h);
  const auto db = derivative(b, h);
  std::vector<double> flux(n), bend(n);
  for (std::size_t i = 0; i < n; ++i) {
    flux[i] = b[i] * dw[i] / a[i];
    bend[i] = db[i] / a[i];
  }
  const auto dflux = derivative(flux, h);
  const auto dbend = derivative(bend, h);

  RotationalSimons out;
  out.simons.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  out.hopf_f.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> sq;
  for (std::size_t i = 0; i < n; ++i) {
    if (!umbilic[i]) out.hopf_f[i] = 0.25 * (Lf[i] * b[i] * b[i] / (a[i] * a[i]) - Nf[i]);
    bool skip = i < edge_skip || i + edge_skip >= n;
    for (std::size_t k = (i >= edge_skip ? i - edge_skip : 0); k <= std::min(n - 1, i + edge_skip); ++k)
      skip = skip || umbilic[k];
    if (skip) {
      ++out.simons.excluded;
      continue;
    }
    const double ab = a[i] * b[i];
    const double K = -dbend[i] / ab;
    const double value = dflux[i] / ab - 2.0 * K;
    out.simons.values[i] = value;
    out.simons.sup = std::max(out.simons.sup, std::abs(value));
    out.simons.intrinsic_vs_extrinsic = std::max(out.simons.intrinsic_vs_extrinsic, std::abs(K + q[i]));
    sq.push_back(value * value);
    ++out.simons.used;
  }
  if (!sq.empty()) out.simons.l2 = std::sqrt(pairwise_sum(sq) / static_cast<double>(sq.size()));

  const double ref = out.hopf_f[n / 2];
  if (std::isfinite(ref) && ref != 0.0) {
    for (double v : out.hopf_f)
      if (std::isfinite(v)) out.hopf_f_variation = std::max(out.hopf_f_variation, std::abs(v - ref) / std::abs(ref));
  }
  return out;
}

double SimonsRefinement::min_ratio() const {
  if (ratios.empty()) return 0.0;
  return *std::min_element(ratios.begin(), ratios.end());
}

SimonsRefinement simons_refinement(const WeingartenProfile& p, double tau, double l1, double l2, std::size_t n0,
                                   std::size_t levels) {
  if (levels < 2) fail_config("refinement study needs at least two levels");
  SimonsRefinement out;
  for (std::size_t level = 0; level < levels; ++level) {
    const std::size_t stride = std::size_t{1} << level;
    const Generatrix g = sample_generatrix(p, tau, Chart::arc_length, l1, l2, n0 * stride, 8);
    // Skip the same physical width at each level.
    const RotationalSimons rs = rotational_simons(g, p, 2 * stride);
    double sup = 0.0;
    for (std::size_t i = 0; i <= n0; ++i) {
      const double v = rs.simons.values[i * stride];
      if (std::isfinite(v)) sup = std::max(sup, std::abs(v));
    }
    out.sup.push_back(sup);
  }
  for (std::size_t k = 0; k + 1 < out.sup.size(); ++k) out.ratios.push_back(out.sup[k] / out.sup[k + 1]);
  return out;
}

}  // namespace eswmt
