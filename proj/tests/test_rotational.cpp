#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"

#include "eswmt/error.hpp"
#include "eswmt/rotational.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain bisection on (x + kp)/2 - f(((x - kp)/2)^2); independent of the
// library's guarded Newton.
double bisect_meridian(const WeingartenProfile& p, double kp) {
  auto g = [&](double x) {
    const double d = 0.5 * (x - kp);
    return 0.5 * (x + kp) - p.eval(d * d);
  };
  double lo = -100.0, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("meridian root for the zero profile is -kp") {
  CHECK(meridian_from_parallel(zero_profile(), 1.0).root == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(meridian_from_parallel(zero_profile(), 0.0).root == doctest::Approx(0.0));
  CHECK(meridian_from_parallel(zero_profile(), -0.3).root == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("meridian root agrees with bisection on the rational family") {
  for (double a : {0.25, 0.5, 1.0}) {
    const WeingartenProfile p = rational_profile(a);
    for (double kp : {-2.0, -0.1, 0.0, 0.05, 0.7, 3.0}) {
      const RootSolve r = meridian_from_parallel(p, kp);
      CHECK(r.root == doctest::Approx(bisect_meridian(p, kp)).epsilon(1e-11));
      CHECK(std::abs(r.residual) < 1e-12);
    }
  }
}

TEST_CASE("meridian root: a supplied hint does not change the result") {
  const WeingartenProfile p = rational_profile(1.0);
  const double cold = meridian_from_parallel(p, 0.4).root;
  CHECK(meridian_from_parallel(p, 0.4, 10.0).root == doctest::Approx(cold).epsilon(1e-13));
  int seen = 0;
  RootOptions opts;
  opts.on_iterate = [&](double) { ++seen; };
  meridian_from_parallel(p, 0.4, std::nullopt, opts);
  CHECK(seen > 0);
}

TEST_CASE("minimal profile reproduces the catenoid in closed form") {
  // rho(s) = sqrt(tau^2 + s^2), z(s) = tau asinh(s / tau).
  for (double tau : {0.5, 1.0, 2.0}) {
    const Generatrix g = integrate_generatrix(zero_profile(), tau, 50.0);
    REQUIRE(g.samples.size() > 10);
    double worst = 0.0;
    for (const auto& s : g.samples) {
      worst = std::max(worst, std::abs(s.rho - std::hypot(tau, s.arc)));
      worst = std::max(worst, std::abs(s.z - tau * std::asinh(s.arc / tau)));
    }
    CHECK(worst < 1e-8);
    CHECK(g.samples.back().arc == doctest::Approx(50.0));
  }
}

TEST_CASE("conformal chart of the catenoid: rho = tau cosh(sigma)") {
  const double tau = 0.8;
  const Generatrix g = sample_generatrix(zero_profile(), tau, Chart::conformal, -2.0, 3.0, 100);
  REQUIRE(g.samples.size() == 101);
  for (const auto& s : g.samples) {
    CHECK(s.rho == doctest::Approx(tau * std::cosh(s.sigma)).epsilon(1e-9));
    CHECK(s.z == doctest::Approx(tau * s.sigma).epsilon(1e-9));
  }
}

TEST_CASE("special catenoids stay outside the neck circle and are convex") {
  for (double a : {0.25, 0.5, 1.0}) {
    for (double tau : {0.5, 1.0, 2.0}) {
      const WeingartenProfile p = rational_profile(a);
      const Generatrix g = integrate_generatrix(p, tau, 200.0);
      const GeneratrixDiagnostics d = diagnose(p, g);
      CHECK(d.min_rho == doctest::Approx(tau).epsilon(1e-12));
      CHECK(d.min_rho_arc == 0.0);
      CHECK(d.convexity_violation > -1e-8);
      CHECK(d.weingarten_residual < 1e-10);
      CHECK(d.max_gauss_curvature <= 1e-12);
      CHECK(d.arc_length_defect < 1e-4);  // chord vs arc on adaptive steps
      for (const auto& s : g.samples) CHECK(s.mean_curvature() >= -1e-14);
    }
  }
}

TEST_CASE("mirror extension reflects height and keeps one neck sample") {
  const Generatrix half = integrate_generatrix(rational_profile(0.5), 1.0, 20.0);
  const Generatrix full = mirror_extend(half);
  const std::size_t n = half.samples.size();
  REQUIRE(full.samples.size() == 2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& up = full.samples[n - 1 + i];
    const auto& down = full.samples[n - 1 - i];
    CHECK(up.rho == half.samples[i].rho);
    CHECK(up.z == half.samples[i].z);
    CHECK(down.rho == half.samples[i].rho);
    CHECK(down.z == -half.samples[i].z);
    CHECK(down.arc == -half.samples[i].arc);
    CHECK(down.mean_curvature() == doctest::Approx(up.mean_curvature()).epsilon(1e-14));
  }
}

TEST_CASE("mirror extension rejects a curve that does not start at the neck") {
  Generatrix g = integrate_generatrix(zero_profile(), 1.0, 5.0);
  g.samples.erase(g.samples.begin());
  CHECK_THROWS_WITH_AS(mirror_extend(g), "not a neck-anchored generatrix", Error);
}

TEST_CASE("band curvature of the catenoid matches the turning angle") {
  // K dA integrates to -2 pi (cos theta(l1) - cos theta(l2)) with cos theta = s / rho.
  const double tau = 1.0;
  const Generatrix g = integrate_generatrix(zero_profile(), tau, 30.0);
  const BandCurvature b = band_total_curvature(zero_profile(), g, 0.0, 20.0, 32);
  const double expected = -2.0 * kPi * (20.0 / std::hypot(tau, 20.0));
  CHECK(b.turning_angle == doctest::Approx(expected).epsilon(1e-8));
  CHECK(b.quadrature == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("revolved catenoid has K = -tau^2 / rho^4 and vanishing H") {
  const double tau = 1.5;
  const Generatrix g = mirror_extend(sample_generatrix(zero_profile(), tau, Chart::arc_length, 0.0, 6.0, 120));
  const ParametricPatch patch = revolve(g, 48, Exec::serial);
  REQUIRE(patch.has_curvatures());
  double worst_k = 0.0, worst_h = 0.0;
  for (std::size_t i = 0; i < patch.grid.nu(); ++i) {
    const double rho = g.samples[i].rho;
    for (std::size_t j = 0; j < patch.grid.nv(); ++j) {
      const std::size_t k = patch.grid.index(i, j);
      worst_k = std::max(worst_k, std::abs(patch.K[k] + tau * tau / std::pow(rho, 4)));
      worst_h = std::max(worst_h, std::abs(patch.H[k]));
    }
  }
  CHECK(worst_k < 1e-9);
  CHECK(worst_h < 1e-9);
}

TEST_CASE("end behavior of the catenoid is proper") {
  const Generatrix g = integrate_generatrix(zero_profile(), 1.0, 1000.0);
  CHECK(classify_end_behavior(g) == EndBehavior::proper);
  CHECK(std::string(to_string(EndBehavior::strip)) == "strip");
}

TEST_CASE("special catenoid ends grow like a comparison catenoid") {
  // Above the neck H >= 0 bends the curve toward the axis less than the
  // catenoid of the same neck, so the height at a given radius is larger.
  const Generatrix g = integrate_generatrix(rational_profile(1.0), 1.0, 1000.0);
  const GeneratrixSample far = g.samples.back();
  CHECK(far.z > std::acosh(far.rho));
  CHECK(classify_end_behavior(g) == EndBehavior::proper);
}

TEST_CASE("non-positive tau is rejected with the admissible range") {
  for (double tau : {0.0, -1.0}) {
    try {
      integrate_generatrix(rational_profile(1.0), tau, 10.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::config);
      CHECK(std::string(e.what()).find("admissible range (0, inf)") != std::string::npos);
    }
  }
}

TEST_CASE("sample_at_arc interpolates linearly and rejects outside values") {
  const Generatrix g = sample_generatrix(zero_profile(), 1.0, Chart::arc_length, 0.0, 4.0, 400);
  CHECK(sample_at_arc(g, 2.005).rho == doctest::Approx(std::hypot(1.0, 2.005)).epsilon(1e-6));
  CHECK_THROWS_AS(sample_at_arc(g, 5.0), Error);
}
