#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "eswmt/error.hpp"
#include "eswmt/surface.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 catenoid(double u, double v) { return {std::cosh(u) * std::cos(v), std::cosh(u) * std::sin(v), u}; }

PatchDerivatives catenoid_derivatives() {
  PatchDerivatives d;
  d.xu = [](double u, double v) { return Vec3(std::sinh(u) * std::cos(v), std::sinh(u) * std::sin(v), 1.0); };
  d.xv = [](double u, double v) { return Vec3(-std::cosh(u) * std::sin(v), std::cosh(u) * std::cos(v), 0.0); };
  d.xuu = [](double u, double v) { return Vec3(std::cosh(u) * std::cos(v), std::cosh(u) * std::sin(v), 0.0); };
  d.xuv = [](double u, double v) { return Vec3(-std::sinh(u) * std::sin(v), std::sinh(u) * std::cos(v), 0.0); };
  d.xvv = [](double u, double v) { return Vec3(-std::cosh(u) * std::cos(v), -std::cosh(u) * std::sin(v), 0.0); };
  return d;
}

// Latitude-longitude chart; X_u x X_v points inward.
Vec3 sphere(double u, double v) { return {std::cos(u) * std::cos(v), std::cos(u) * std::sin(v), std::sin(u)}; }

ParametricPatch fd_patch(const std::function<Vec3(double, double)>& x, Grid2 grid) {
  ParametricPatch p = sample_patch(std::move(grid), x);
  fundamental_forms(p, Exec::serial);
  curvatures(p, Exec::serial);
  return p;
}

double sup_abs_diff(const ParametricPatch& p, const std::vector<double>& field,
                    const std::function<double(double, double)>& exact, std::size_t skip = 0) {
  double worst = 0.0;
  for (std::size_t i = skip; i + skip < p.grid.nu(); ++i)
    for (std::size_t j = 0; j < p.grid.nv(); ++j)
      worst = std::max(worst, std::abs(field[p.grid.index(i, j)] - exact(p.grid.u[i], p.grid.v[j])));
  return worst;
}

double brute_hausdorff(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto one_sided = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = INFINITY;
      for (const auto& q : y) best = std::min(best, (p - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

TEST_CASE("plane has vanishing curvature") {
  const ParametricPatch p = fd_patch([](double u, double v) { return Vec3(u, v, 0.0); },
                                     Grid2::uniform(-1, 1, 11, -1, 1, 11));
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    CHECK(std::abs(p.H[k]) < 1e-14);
    CHECK(std::abs(p.K[k]) < 1e-14);
    CHECK(p.normal[k].z() == doctest::Approx(1.0));
  }
  CHECK(p.is_conformal());
}

TEST_CASE("unit sphere with inward normal has H = K = 1 and q = 0") {
  const ParametricPatch p = fd_patch(sphere, Grid2::periodic(-1.0, 1.0, 201, 256));
  CHECK(sup_abs_diff(p, p.H, [](double, double) { return 1.0; }, 2) < 5e-4);
  CHECK(sup_abs_diff(p, p.K, [](double, double) { return 1.0; }, 2) < 5e-4);
  CHECK(sup_abs_diff(p, p.q, [](double, double) { return 0.0; }, 2) < 1e-4);
  const Vec3 x = p.X[p.grid.index(100, 0)];
  CHECK(p.normal[p.grid.index(100, 0)].dot(x) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("catenoid curvature from analytic derivatives") {
  ParametricPatch p = sample_patch(Grid2::periodic(-2.0, 2.0, 41, 32), catenoid, catenoid_derivatives());
  fundamental_forms(p, Exec::serial);
  curvatures(p, Exec::serial);
  CHECK(sup_abs_diff(p, p.K, [](double u, double) { return -std::pow(std::cosh(u), -4); }) < 1e-13);
  CHECK(sup_abs_diff(p, p.H, [](double, double) { return 0.0; }) < 1e-14);
  CHECK(sup_abs_diff(p, p.k1, [](double u, double) { return std::pow(std::cosh(u), -2); }) < 1e-13);
  CHECK(p.is_conformal());
}

TEST_CASE("finite-difference curvature converges at second order") {
  auto err = [](std::size_t nu) {
    const ParametricPatch p = fd_patch(catenoid, Grid2::periodic(-1.5, 1.5, nu, 4 * (nu - 1)));
    return sup_abs_diff(p, p.K, [](double u, double) { return -std::pow(std::cosh(u), -4); }, 2);
  };
  const double coarse = err(41);
  const double fine = err(81);
  CHECK(coarse / fine > 3.5);
  CHECK(coarse / fine < 4.5);
}

TEST_CASE("Hopf differential of the catenoid") {
  ParametricPatch p = sample_patch(Grid2::periodic(-1.0, 1.0, 161, 320), catenoid, catenoid_derivatives());
  fundamental_forms(p, Exec::serial);
  curvatures(p, Exec::serial);
  const HopfField h = hopf_differential(p);
  CHECK(h.identity_residual < 1e-12);
  // Q = -1/2 in this chart.
  for (std::size_t i = 2; i + 2 < p.grid.nu(); ++i) {
    const std::size_t k = p.grid.index(i, 7);
    CHECK(std::abs(h.Q[k] + 0.5) < 1e-13);
    CHECK(h.lambda[k] == doctest::Approx(0.5 * std::pow(std::cosh(p.grid.u[i]), 2)).epsilon(1e-12));
  }
  CHECK(cauchy_riemann_residual(p.grid, h.Q).sup < 1e-12);
}

TEST_CASE("Hopf differential needs a conformal chart") {
  const ParametricPatch p = fd_patch([](double u, double v) { return Vec3(u, 2.0 * v, u * v); },
                                     Grid2::uniform(-1, 1, 11, -1, 1, 11));
  CHECK_THROWS_WITH_AS(hopf_differential(p), "conformal chart required", Error);
}

TEST_CASE("Cauchy-Riemann residual separates z^2 from conj(z)") {
  const Grid2 g = Grid2::uniform(-1, 1, 41, -1, 1, 41);
  std::vector<Complex> hol(g.size()), anti(g.size());
  for (std::size_t i = 0; i < g.nu(); ++i)
    for (std::size_t j = 0; j < g.nv(); ++j) {
      const Complex z(g.u[i], g.v[j]);
      hol[g.index(i, j)] = z * z;
      anti[g.index(i, j)] = std::conj(z);
    }
  CHECK(cauchy_riemann_residual(g, hol).sup < 1e-12);
  CHECK(cauchy_riemann_residual(g, anti).sup == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Weingarten residual of a minimal surface against the zero profile") {
  const ParametricPatch p = fd_patch(catenoid, Grid2::periodic(-1.0, 1.0, 81, 128));
  const FieldResidual r = weingarten_residual(p, zero_profile(), Exec::serial);
  CHECK(r.sup < 1e-3);
  CHECK(r.values.size() == p.grid.size());
  CHECK(r.values[r.argmax] == r.sup);
}

TEST_CASE("rigid alignment recovers a known motion") {
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  std::vector<Vec3> fixed(50);
  for (auto& x : fixed) x = Vec3(n01(rng), n01(rng), n01(rng));
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  const Vec3 t(0.3, -2.0, 5.0);
  std::vector<Vec3> moving;
  for (const auto& x : fixed) moving.push_back(R * x + t);
  const RigidAlignment a = align_rigid(moving, fixed);
  CHECK(a.max_distance < 1e-12);
  CHECK((a.rotation - R.transpose()).norm() < 1e-12);
  CHECK_THROWS_AS(align_rigid(moving, std::vector<Vec3>(3)), Error);
}

TEST_CASE("Hausdorff distance matches brute force") {
  CHECK(hausdorff_distance({Vec3(0, 0, 0), Vec3(1, 0, 0)}, {Vec3(0, 0, 0), Vec3(1, 0, 2)}) == doctest::Approx(2.0));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> a(300), b(200);
  for (auto& x : a) x = Vec3(u(rng), u(rng), u(rng));
  for (auto& x : b) x = Vec3(u(rng), u(rng), 2.0 * u(rng));
  CHECK(hausdorff_distance(a, b) == doctest::Approx(brute_hausdorff(a, b)).epsilon(1e-15));
  CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("grid helpers") {
  const Grid2 g = Grid2::periodic(0.0, 1.0, 11, 8);
  CHECK(g.periodic_v);
  CHECK(g.dv() == doctest::Approx(2.0 * kPi / 8.0));
  CHECK(g.du() == doctest::Approx(0.1));
  CHECK_THROWS_AS(Grid2::periodic(0.0, 1.0, 11, 2), Error);
  Grid2 bad = g;
  bad.u[3] += 0.01;
  CHECK_THROWS_WITH_AS(bad.du(), "finite differences need a uniform grid along u", Error);
}
