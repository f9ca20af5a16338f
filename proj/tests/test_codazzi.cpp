#include <cmath>
#include <numbers>

#include "doctest.h"

#include "eswmt/codazzi.hpp"
#include "eswmt/error.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

double phi_rational(double a, double r) { return a * (std::atan(r) + r / (1.0 + r * r)); }

ParametricPatch rotational_band(const WeingartenProfile& p, double tau, double half_arc, std::size_t n, std::size_t nphi) {
  const Generatrix g =
      mirror_extend(sample_generatrix(p, tau, Chart::arc_length, 0.0, half_arc, n));
  return revolve(g, nphi, Exec::serial);
}

// Latitude-longitude sphere with exact derivatives: q vanishes to roundoff.
ParametricPatch analytic_sphere() {
  PatchDerivatives d;
  d.xu = [](double u, double v) { return Vec3(-std::sin(u) * std::cos(v), -std::sin(u) * std::sin(v), std::cos(u)); };
  d.xv = [](double u, double v) { return Vec3(-std::cos(u) * std::sin(v), std::cos(u) * std::cos(v), 0.0); };
  d.xuu = [](double u, double v) { return Vec3(-std::cos(u) * std::cos(v), -std::cos(u) * std::sin(v), -std::sin(u)); };
  d.xuv = [](double u, double v) { return Vec3(std::sin(u) * std::sin(v), -std::sin(u) * std::cos(v), 0.0); };
  d.xvv = [](double u, double v) { return Vec3(-std::cos(u) * std::cos(v), -std::cos(u) * std::sin(v), 0.0); };
  ParametricPatch p = sample_patch(
      Grid2::periodic(-1.0, 1.0, 41, 64),
      [](double u, double v) { return Vec3(std::cos(u) * std::cos(v), std::cos(u) * std::sin(v), std::sin(u)); }, d);
  fundamental_forms(p, Exec::serial);
  curvatures(p, Exec::serial);
  return p;
}

double sup_abs(const std::vector<double>& x, const std::vector<double>& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace

TEST_CASE("sinh(phi(r))/r against the closed form") {
  for (double a : {0.25, 1.0}) {
    const WeingartenProfile p = rational_profile(a);
    for (double r : {1e-3, 0.5, 2.0, 30.0})
      CHECK(sinh_phi_over_r(p, r) == doctest::Approx(std::sinh(phi_rational(a, r)) / r).epsilon(1e-10));
    // phi(r) ~ 2 a r near 0.
    CHECK(sinh_phi_over_r(p, 1e-9) == doctest::Approx(2.0 * a).epsilon(1e-8));
    CHECK(sinh_phi_over_r(p, 0.0) == doctest::Approx(2.0 * a).epsilon(1e-12));
  }
  CHECK(sinh_phi_over_r(zero_profile(), 0.7) == 0.0);
}

TEST_CASE("zero profile: the adapted pair is (I, II)") {
  const ParametricPatch patch = rotational_band(zero_profile(), 1.0, 3.0, 60, 32);
  const AdaptedPair pair = adapted_pair(patch, zero_profile(), Exec::serial);
  CHECK(sup_abs(pair.E, patch.E) == 0.0);
  CHECK(sup_abs(pair.F, patch.F) == 0.0);
  CHECK(sup_abs(pair.G, patch.G) == 0.0);
  CHECK(sup_abs(pair.L, patch.L) < 1e-12);
  CHECK(sup_abs(pair.M, patch.M) < 1e-12);
  CHECK(sup_abs(pair.N, patch.Nn) < 1e-12);
  CHECK(comparability_constant(pair) == 1.0);
}

TEST_CASE("adapted pair invariants on special catenoids") {
  for (double a : {0.25, 0.5, 1.0}) {
    const WeingartenProfile p = rational_profile(a);
    const ParametricPatch patch = rotational_band(p, 1.0, 5.0, 100, 32);
    const AdaptedPair pair = adapted_pair(patch, p, Exec::serial);
    const PairInvariants inv = pair_invariants(pair, Exec::serial);
    CHECK(inv.sup_mean < 1e-10);
    CHECK(inv.sup_gauss < 1e-10);
    CHECK(inv.sup_skew < 1e-10);
    CHECK(inv.mask_mismatch == 0);
    // |P| <= phi(inf) = a pi / 2.
    const double c = comparability_constant(pair);
    CHECK(c > 1.0);
    CHECK(c <= std::exp(a * kPi) * (1.0 + 1e-12));
  }
}

TEST_CASE("comparability shrinks as the neck widens") {
  // Larger necks have smaller q, so P stays closer to zero.
  const WeingartenProfile p = rational_profile(1.0);
  double previous = INFINITY;
  for (double tau : {0.5, 1.0, 2.0}) {
    const double c = comparability_constant(adapted_pair(rotational_band(p, tau, 3.0, 60, 16), p, Exec::serial));
    CHECK(c < previous);
    previous = c;
  }
}

TEST_CASE("umbilic sphere: pair is masked and the Simons test refuses") {
  const ParametricPatch sphere = analytic_sphere();
  const AdaptedPair pair = adapted_pair(sphere, rational_profile(0.5), Exec::serial);
  for (auto m : pair.umbilic) CHECK(m == 1);
  CHECK_THROWS_WITH_AS(simons_residual(pair, 2, Exec::serial), doctest::Contains("Simons test inapplicable"), Error);
}

TEST_CASE("intrinsic curvature of known metrics") {
  const Grid2 g = Grid2::periodic(-1.0, 1.0, 81, 32);
  const std::size_t n = g.size();
  std::vector<double> one(n, 1.0), zero(n, 0.0), gg(n), conf(n);
  for (std::size_t i = 0; i < g.nu(); ++i)
    for (std::size_t j = 0; j < g.nv(); ++j) {
      gg[g.index(i, j)] = std::pow(std::cos(g.u[i]), 2);
      conf[g.index(i, j)] = std::pow(std::cosh(g.u[i]), 2);
    }
  const auto flat = intrinsic_curvature(g, one, zero, one, Exec::serial);
  const auto sphere = intrinsic_curvature(g, one, zero, gg, Exec::serial);
  const auto cat = intrinsic_curvature(g, conf, zero, conf, Exec::serial);
  for (std::size_t i = 2; i + 2 < g.nu(); ++i)
    for (std::size_t j = 0; j < g.nv(); ++j) {
      const std::size_t k = g.index(i, j);
      CHECK(std::abs(flat[k]) < 1e-12);
      CHECK(cat[k] == doctest::Approx(-std::pow(std::cosh(g.u[i]), -4)).epsilon(2e-3));
    }
  const Grid2 fine = Grid2::periodic(-1.0, 1.0, 401, 16);
  std::vector<double> one_f(fine.size(), 1.0), zero_f(fine.size(), 0.0), cos2(fine.size());
  for (std::size_t i = 0; i < fine.nu(); ++i)
    for (std::size_t j = 0; j < fine.nv(); ++j) cos2[fine.index(i, j)] = std::pow(std::cos(fine.u[i]), 2);
  const auto round = intrinsic_curvature(fine, one_f, zero_f, cos2, Exec::serial);
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < fine.nu(); ++i) worst = std::max(worst, std::abs(round[fine.index(i, 0)] - 1.0));
  CHECK(worst < 1e-4);
  CHECK(std::abs(sphere[g.index(40, 0)] - 1.0) < 1e-3);
  CHECK_THROWS_WITH_AS(intrinsic_curvature(g, one, one, one, Exec::serial), doctest::Contains("degenerate metric"),
                       Error);
}

TEST_CASE("Simons residual converges at second order") {
  for (const auto& p : {zero_profile(), rational_profile(0.5), rational_profile(1.0)}) {
    const SimonsRefinement r = simons_refinement(p, 1.0, 0.5, 3.0, 40, 3);
    REQUIRE(r.sup.size() == 3);
    REQUIRE(r.ratios.size() == 2);
    CHECK(r.min_ratio() > 3.5);
    CHECK(r.sup.back() < r.sup.front());
  }
  CHECK_THROWS_AS(simons_refinement(zero_profile(), 1.0, 0.5, 3.0, 40, 1), Error);
}

TEST_CASE("Hopf coefficient of the adapted pair is constant along the generatrix") {
  const WeingartenProfile p = rational_profile(1.0);
  const Generatrix g = sample_generatrix(p, 1.0, Chart::arc_length, 0.5, 3.0, 400);
  const RotationalSimons r = rotational_simons(g, p);
  CHECK(r.hopf_f_variation < 1e-4);
  CHECK(r.simons.used > 0);
  CHECK(r.simons.sup < 1e-3);
}

TEST_CASE("Simons residual on a two-dimensional band") {
  const WeingartenProfile p = rational_profile(0.5);
  const AdaptedPair pair = adapted_pair(rotational_band(p, 1.0, 3.0, 120, 64), p, Exec::serial);
  const SimonsResidual s = simons_residual(pair, 2, Exec::serial);
  CHECK(s.used > 0);
  CHECK(s.excluded > 0);  // edge rows
  CHECK(s.sup < 1e-2);
  CHECK(s.l2 <= s.sup);
}
