#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"

#include "eswmt/error.hpp"
#include "eswmt/kenmotsu.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

// Mercator chart of the unit sphere: conformal, X_u x X_v = -sech^2(u) X.
Vec3 mercator(double u, double v) {
  const double s = 1.0 / std::cosh(u);
  return {s * std::cos(v), s * std::sin(v), std::tanh(u)};
}

KenmotsuField sphere_field(std::size_t nu, std::size_t nv) {
  KenmotsuField f;
  f.grid = Grid2::periodic(-1.0, 1.0, nu, nv);
  for (double u : f.grid.u)
    for (double v : f.grid.v) {
      f.G.push_back(stereographic(-mercator(u, v)));
      f.H.push_back(1.0);
    }
  return f;
}

KenmotsuField planar_field(const std::function<Complex(Complex)>& g, std::size_t n = 41) {
  KenmotsuField f;
  f.grid = Grid2::uniform(-0.5, 0.5, n, -0.5, 0.5, n);
  for (double u : f.grid.u)
    for (double v : f.grid.v) {
      f.G.push_back(g(Complex(u, v)));
      f.H.push_back(1.0);
    }
  return f;
}

}  // namespace

TEST_CASE("stereographic projection round trip at both poles") {
  std::mt19937 rng(3);
  std::normal_distribution<double> n01;
  for (int i = 0; i < 200; ++i) {
    const Vec3 n = Vec3(n01(rng), n01(rng), n01(rng)).normalized();
    for (auto pole : {ProjectionPole::north, ProjectionPole::south})
      CHECK((inverse_stereographic(stereographic(n, pole), pole) - n).norm() < 1e-13);
    CHECK(std::abs(stereographic(n, ProjectionPole::south) - 1.0 / stereographic(n, ProjectionPole::north)) <
          1e-10 * (1.0 + std::abs(stereographic(n, ProjectionPole::south))));
  }
  CHECK(std::abs(stereographic(Vec3(1, 0, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(stereographic(Vec3(0, 0, -1))) < 1e-15);
  CHECK(std::abs(stereographic(Vec3(0, 0, 1), ProjectionPole::south)) < 1e-15);
}

TEST_CASE("Gauss map at the projection pole asks for the other chart") {
  ParametricPatch p = sample_patch(Grid2::uniform(-1, 1, 6, -1, 1, 6), [](double u, double v) { return Vec3(u, v, 0.0); });
  fundamental_forms(p, Exec::serial);
  CHECK_THROWS_WITH_AS(gauss_map_stereo(p), doctest::Contains("switch projection pole"), Error);
  for (Complex g : gauss_map_stereo(p, ProjectionPole::south)) CHECK(std::abs(g) < 1e-15);
}

TEST_CASE("Kenmotsu recovery of the round sphere") {
  auto err = [](std::size_t nu) {
    const KenmotsuField f = sphere_field(nu, 2 * (nu - 1));
    const ParametricPatch x = recover_immersion(f, mercator(f.grid.u[0], f.grid.v[0]), Exec::serial);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.grid.nu(); ++i)
      for (std::size_t j = 0; j < f.grid.nv(); ++j)
        worst = std::max(worst, (x.X[f.grid.index(i, j)] - mercator(f.grid.u[i], f.grid.v[j])).norm());
    return worst;
  };
  const double coarse = err(41);
  const double fine = err(81);
  CHECK(fine < 1e-4);
  CHECK(coarse / fine > 3.5);
}

TEST_CASE("inward sphere: anti-conformal Gauss map, integrable field") {
  // G depends on conj(z) only, so G_z vanishes and mu = G_zbar / G_z is undefined.
  const KenmotsuField f = sphere_field(81, 160);
  CHECK_THROWS_WITH_AS(beltrami_mu(f, 1e-8, Exec::serial), doctest::Contains("degenerate Gauss map chart"), Error);
  const double coarse = integrability_residual(sphere_field(41, 80), Exec::serial).sup;
  const double fine = integrability_residual(f, Exec::serial).sup;
  CHECK(fine < 1e-3);
  CHECK(coarse / fine > 3.5);
}

TEST_CASE("Beltrami coefficient of an affine Gauss map is constant") {
  for (double k : {0.0, 0.3, -0.6}) {
    const BeltramiField mu = beltrami_mu(planar_field([k](Complex z) { return z + k * std::conj(z); }), 1e-8,
                                         Exec::serial);
    CHECK(mu.sup == doctest::Approx(std::abs(k)).epsilon(1e-10));
    CHECK(std::abs(mu.mu[20 * 41 + 20] - k) < 1e-10);
  }
}

TEST_CASE("an anti-holomorphic Gauss map degenerates the chart") {
  CHECK_THROWS_WITH_AS(beltrami_mu(planar_field([](Complex z) { return std::conj(z); })),
                       doctest::Contains("degenerate Gauss map chart"), Error);
}

TEST_CASE("integrability rejects a perturbed Gauss map") {
  const Generatrix g = sample_generatrix(rational_profile(1.0), 1.0, Chart::conformal, 0.2, 1.5, 80);
  KenmotsuField f = rotational_kenmotsu_field(g, 160);
  const double clean = integrability_residual(f, Exec::serial).sup;
  for (std::size_t i = 0; i < f.grid.nu(); ++i)
    for (std::size_t j = 0; j < f.grid.nv(); ++j) {
      const Complex z(f.grid.u[i], f.grid.v[j]);
      f.G[f.grid.index(i, j)] += 1e-2 * std::conj(z) * std::conj(z);
    }
  const double perturbed = integrability_residual(f, Exec::serial).sup;
  CHECK(clean < 1e-4);
  CHECK(perturbed > 100.0 * clean);
}

TEST_CASE("dilatation") {
  CHECK(dilatation(0.0) == 1.0);
  CHECK(dilatation(0.5) == doctest::Approx(3.0));
  CHECK_THROWS_WITH_AS(dilatation(1.0), doctest::Contains("not quasiconformal"), Error);
}

TEST_CASE("Mori bound on conformal and affine disk maps") {
  const MoriReport conformal = mori_bound_check(conformal_disk_samples(), 5000);
  CHECK(conformal.gamma == 1.0);
  CHECK(conformal.violations == 0);
  CHECK(conformal.pairs > 4900);  // coincident samples are skipped
  CHECK(conformal.pairs <= 5000);

  const DiskSamples affine = affine_disk_samples(0.5);
  CHECK(affine.mu_sup == doctest::Approx(0.5));
  const MoriReport r = mori_bound_check(affine, 5000);
  CHECK(r.gamma == doctest::Approx(3.0));
  CHECK(r.violations == 0);
  CHECK(r.worst_ratio < 1.0);
  CHECK(mori_bound_check(affine, 5000).worst_ratio == r.worst_ratio);
  CHECK_THROWS_AS(affine_disk_samples(1.0), Error);
}

TEST_CASE("Mori bound on the end of a special catenoid") {
  const Generatrix g = sample_generatrix(rational_profile(1.0), 1.0, Chart::conformal, 0.0, 12.0, 240);
  const DiskSamples end = rotational_end_disk(g, 0.0);
  CHECK(end.mu_sup < 1.0);
  const MoriReport r = mori_bound_check(end, 5000);
  CHECK(r.violations == 0);
}

TEST_CASE("round trip through the representation") {
  const RoundTrip r = kenmotsu_roundtrip(rational_profile(1.0), 1.0, 0.2, 3.0, 81, 160, Exec::serial);
  CHECK(r.hausdorff < 1e-5);
  CHECK(r.max_alignment_error < 1e-5);
  CHECK(r.mu_sup < 1.0);
  CHECK(r.dilatation == doctest::Approx((1.0 + r.mu_sup) / (1.0 - r.mu_sup)));
  CHECK(r.mu_identity < 1e-4);
  CHECK(r.hopf_discrepancy < 1e-3);
  CHECK(r.nodes == 81u * 160u);
}

TEST_CASE("minimal surfaces have no Kenmotsu representation") {
  CHECK_THROWS_WITH_AS(kenmotsu_roundtrip(zero_profile(), 1.0, 0.2, 3.0, 41, 80, Exec::serial),
                       doctest::Contains("mean curvature vanishes"), Error);
}

TEST_CASE("a constant Gauss map recovers a single point") {
  const KenmotsuField f = planar_field([](Complex) { return Complex(0.4, -0.1); });
  const Vec3 base(1.0, 2.0, 3.0);
  for (const Vec3& x : recover_immersion(f, base, Exec::serial).X) CHECK((x - base).norm() < 1e-12);
}
