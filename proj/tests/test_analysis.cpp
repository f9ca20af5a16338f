#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"

#include "eswmt/analysis.hpp"
#include "eswmt/error.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<EndSample> graph_samples(const std::function<double(double, double)>& height, double R0, double R1) {
  std::vector<EndSample> out;
  for (int i = 0; i < 40; ++i) {
    const double r = R0 * std::pow(R1 / R0, i / 39.0);
    for (int j = 0; j < 12; ++j) {
      const double t = 2.0 * kPi * j / 12.0;
      const double x = r * std::cos(t), y = r * std::sin(t);
      out.push_back({x, y, height(x, y)});
    }
  }
  return out;
}

const Generatrix& catenoid_half() {
  static const Generatrix g = integrate_generatrix(zero_profile(), 1.0, 1100.0);
  return g;
}

const Generatrix& special_half() {
  static const Generatrix g = integrate_generatrix(rational_profile(1.0), 1.0, 1100.0);
  return g;
}

}  // namespace

TEST_CASE("tail modes parse and print") {
  for (auto m : {TailMode::turning_angle, TailMode::radial_decay, TailMode::none})
    CHECK(parse_tail_mode(to_string(m)) == m);
  CHECK_THROWS_WITH_AS(parse_tail_mode("spline"), doctest::Contains("valid: turning-angle, radial-decay, none"), Error);
}

TEST_CASE("catenoid total curvature is -4 pi") {
  const CurvatureBudget b = total_curvature(zero_profile(), catenoid_half(), 200.0, TailMode::turning_angle);
  CHECK(b.total == doctest::Approx(-4.0 * kPi).epsilon(1e-8));
  CHECK(b.limit_angle_fit == doctest::Approx(0.0).epsilon(1e-3));
  // Without a tail the truncation error is 4 pi (1 - R / sqrt(1 + R^2)).
  const CurvatureBudget bare = total_curvature(zero_profile(), catenoid_half(), 200.0, TailMode::none);
  CHECK(bare.total == doctest::Approx(-4.0 * kPi * 200.0 / std::hypot(1.0, 200.0)).epsilon(1e-9));
  const CurvatureBudget radial = total_curvature(zero_profile(), catenoid_half(), 200.0, TailMode::radial_decay);
  CHECK(radial.total == doctest::Approx(-4.0 * kPi).epsilon(1e-5));
}

TEST_CASE("special catenoids carry total curvature -4 pi") {
  for (double a : {0.25, 1.0}) {
    const WeingartenProfile p = rational_profile(a);
    const Generatrix half = integrate_generatrix(p, 1.0, 1100.0);
    const CurvatureBudget b = total_curvature(p, half, 200.0, TailMode::turning_angle);
    const JorgeMeeksReport jm = jorge_meeks_check(b, 0, 2);
    CHECK(jm.pass);
    CHECK(jm.target == doctest::Approx(-4.0 * kPi));
    CHECK(jm.regime == "plane or special catenoid regime");
  }
}

TEST_CASE("Jorge-Meeks: genus and ends are ambiguous beyond one end") {
  CurvatureBudget b;
  b.total = -4.0 * kPi;
  const JorgeMeeksReport two = jorge_meeks_check(b, 0, 2);
  CHECK(two.pass);
  CHECK(two.ambiguous_topology);
  CHECK(two.note.find("(1,1)") != std::string::npos);
  const JorgeMeeksReport torus = jorge_meeks_check(b, 1, 1);
  CHECK(torus.pass);
  CHECK(torus.ambiguous_topology);

  CurvatureBudget plane;
  const JorgeMeeksReport p = jorge_meeks_check(plane, 0, 1);
  CHECK(p.pass);
  CHECK_FALSE(p.ambiguous_topology);
  CHECK(p.regime == "plane regime");
  CHECK_THROWS_AS(jorge_meeks_check(plane, 0, 0), Error);

  b.set_topology(0, 2);
  CHECK(b.jm_target == doctest::Approx(-4.0 * kPi));
  CHECK(b.deficit == 0.0);
}

TEST_CASE("Enneper fails the embedded one-end count") {
  const CurvatureBudget b = total_curvature(enneper_data(), 0.0, 100.0, TailMode::radial_decay);
  CHECK(b.total == doctest::Approx(-4.0 * kPi).epsilon(1e-6));
  const JorgeMeeksReport jm = jorge_meeks_check(b, 0, 1);
  CHECK_FALSE(jm.pass);
  CHECK(jm.deficit == doctest::Approx(4.0 * kPi).epsilon(1e-6));
  CHECK_THROWS_AS(total_curvature(enneper_data(), 0.0, 100.0, TailMode::turning_angle), Error);
}

TEST_CASE("end fit recovers an exact expansion") {
  const auto s = graph_samples([](double x, double y) {
    const double r2 = x * x + y * y;
    return 2.0 * 0.5 * std::log(r2) + 0.5 + (0.3 * x - 0.1 * y) / r2;
  }, 10.0, 1000.0);
  const EndFit f = fit_end_expansion(s, 10.0, 1000.0);
  CHECK(f.beta == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.a0 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f.a1 == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(f.a2 == doctest::Approx(-0.1).epsilon(1e-8));
  CHECK(f.residual < 1e-10);
  CHECK(f.stable);
  CHECK_THROWS_WITH_AS(fit_end_expansion(s, 10.0, 50.0), doctest::Contains("annulus too thin"), Error);
}

TEST_CASE("catenoid end: height = log(2 r) to leading order") {
  const auto s = rotational_end_samples(catenoid_half(), true, 10.0, 1000.0);
  const EndFit f = fit_end_expansion(s, 10.0, 1000.0);
  CHECK(f.beta == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(f.a0 == doctest::Approx(std::log(2.0)).epsilon(5e-3));
  CHECK(f.stable);
  const EndFit bottom = fit_end_expansion(rotational_end_samples(catenoid_half(), false, 10.0, 1000.0), 10.0, 1000.0);
  CHECK(bottom.beta == doctest::Approx(-f.beta).epsilon(1e-12));
  CHECK(sample_at_rho(catenoid_half(), 5.0).z == doctest::Approx(std::acosh(5.0)).epsilon(1e-8));
}

TEST_CASE("growth sign of simple graphs") {
  const auto flat = graph_samples([](double, double) { return 0.7; }, 1.0, 100.0);
  CHECK(growth_sign_check(flat, 0.7).sign == GrowthSign::bounded);
  const auto up = graph_samples([](double x, double y) { return std::log(std::hypot(x, y)); }, 1.0, 100.0);
  CHECK(growth_sign_check(up, 0.0).sign == GrowthSign::positive);
  const auto down = graph_samples([](double x, double y) { return -std::log(std::hypot(x, y)); }, 1.0, 100.0);
  CHECK(growth_sign_check(down, 0.0).sign == GrowthSign::negative);
  const auto saddle = graph_samples([](double x, double y) { return x * x - y * y; }, 1.0, 100.0);
  CHECK(growth_sign_check(saddle, 0.0).sign == GrowthSign::indeterminate);
  CHECK(std::string(to_string(GrowthSign::indeterminate)) == "indeterminate");
}

TEST_CASE("area growth constants") {
  const AreaGrowth plane = area_growth_constant([](double R) { return kPi * R * R; }, {10.0, 100.0, 1000.0});
  CHECK(plane.constant == doctest::Approx(1.0).epsilon(1e-12));
  const AreaGrowth synthetic =
      area_growth_constant([](double R) { return kPi * (2.0 * R * R + 3.0 * std::log(R) + 1.0); }, {10.0, 100.0, 1000.0});
  CHECK(synthetic.constant == doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_WITH_AS(area_growth_constant([](double R) { return R * R * (2.0 + std::sin(R)); }, {1.0, 2.0, 4.0, 8.0}),
                       doctest::Contains("inconclusive"), Error);

  const AreaGrowth cat = area_growth_constant(catenoid_half(), {50.0, 100.0, 200.0, 400.0});
  CHECK(cat.constant == doctest::Approx(1.0).epsilon(1e-3));
  const AreaGrowth special = area_growth_constant(special_half(), {50.0, 100.0, 200.0, 400.0});
  CHECK(special.constant == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Shiohama total curvature in extrinsic form") {
  CHECK(shiohama_total_curvature(1, 1.0) == 0.0);
  CHECK(shiohama_total_curvature(0, 2.0) == doctest::Approx(-4.0 * kPi));
}

TEST_CASE("second fundamental form budget") {
  // Minimal: |II|^2 = -2 K, so the total is 8 pi.
  const SecondFormBudget cat = second_form_budget(zero_profile(), catenoid_half(), 200.0, 0.0);
  CHECK(cat.integral_H2 == doctest::Approx(0.0));
  CHECK(cat.integral_K == doctest::Approx(-4.0 * kPi).epsilon(1e-4));
  CHECK(cat.integral_II2 == doctest::Approx(8.0 * kPi).epsilon(1e-4));
  CHECK(cat.neck_II == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  const SecondFormBudget sp = second_form_budget(rational_profile(1.0), special_half(), 200.0, 0.5);
  CHECK(sp.inequality_holds);
  CHECK(sp.margin > 0.0);
  CHECK(sp.integral_H2 > 0.0);
  CHECK(sp.outer_II < 1e-3 * sp.neck_II);
}

TEST_CASE("Gauss-Bonnet on rotational annuli") {
  for (const auto& p : {zero_profile(), rational_profile(0.5)}) {
    const GaussBonnet gb = gauss_bonnet_annulus(p, 1.0, 5.0, 401, 128, Exec::serial);
    CHECK(gb.euler_characteristic == 0.0);
    CHECK(gb.defect < 5e-3);
    CHECK(gb.curvature_integral < 0.0);
  }
}
