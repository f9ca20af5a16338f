#include <cmath>
#include <numbers>

#include "doctest.h"

#include "eswmt/error.hpp"
#include "eswmt/profile.hpp"

using namespace eswmt;

namespace {

constexpr double kPi = std::numbers::pi;

WeingartenProfile custom(std::function<double(double)> f, std::function<double(double)> df, std::string label) {
  WeingartenProfile p;
  p.eval = std::move(f);
  p.deriv = std::move(df);
  p.label = std::move(label);
  return p;
}

// sqrt(t) - f(t) = 4 sqrt(t) / (sqrt(t) + 4) -> 4.
WeingartenProfile finite_growth_profile() {
  return custom([](double t) { return t / (std::sqrt(t) + 4.0); },
                [](double t) {
                  const double s = std::sqrt(t);
                  return (0.5 * s + 4.0) / ((s + 4.0) * (s + 4.0));
                },
                "t/(sqrt(t)+4)");
}

}  // namespace

TEST_CASE("zero profile passes every condition") {
  const ProfileReport r = validate_profile(zero_profile());
  CHECK(r.passes);
  CHECK(r.sup_ellipticity == 0.0);
  CHECK(r.c_bar == 0.0);
  REQUIRE(r.growth);
  CHECK(r.growth->diverges);
  CHECK(sqrt_envelope_constant(zero_profile()) == 0.0);
  CHECK(adapted_phi(zero_profile(), 3.0) == 0.0);
}

TEST_CASE("zero profile passes on any admissible sampling") {
  Sampling s;
  s.t_min = 1e-3;
  s.t_max = 1e3;
  s.points = 50;
  s.allow_narrow = true;
  CHECK(validate_profile(zero_profile(), s).passes);
}

TEST_CASE("rational family: supremum of 4 t f'^2") {
  // 4 t / (1 + t)^4 is maximal where (1 + t) = 4 t, i.e. t = 1/3, value 27/64.
  const ProfileReport r = validate_profile(rational_profile(1.0));
  CHECK(r.passes);
  CHECK(r.sup_ellipticity == doctest::Approx(27.0 / 64.0).epsilon(1e-9));
  CHECK(r.sup_ellipticity_at == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  CHECK(r.c_bar == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.c_bar < 1.0);
  REQUIRE(r.growth);
  CHECK(r.growth->diverges);
}

TEST_CASE("ellipticity scales with the square of the amplitude") {
  for (double a : {0.25, 0.5, 1.2}) {
    CHECK(validate_profile(rational_profile(a)).sup_ellipticity == doctest::Approx(a * a * 27.0 / 64.0).epsilon(1e-9));
  }
}

TEST_CASE("steep rational profile fails ellipticity with a witness") {
  const ProfileReport r = validate_profile(rational_profile(1.6));
  CHECK_FALSE(r.passes);
  CHECK_FALSE(r.ellipticity.ok());
  CHECK(r.sup_ellipticity == doctest::Approx(2.56 * 27.0 / 64.0).epsilon(1e-9));
  CHECK(r.ellipticity.witness_t > 0.0);
  CHECK(4.0 * r.ellipticity.witness_t * std::pow(1.6 / std::pow(1.0 + r.ellipticity.witness_t, 2), 2) >= 1.0);
}

TEST_CASE("square-root profile fails Lipschitz at zero") {
  const ProfileReport r = validate_profile(
      custom([](double t) { return 0.5 * std::sqrt(t); }, [](double t) { return 0.25 / std::sqrt(t); }, "sqrt"));
  CHECK_FALSE(r.passes);
  CHECK_FALSE(r.lipschitz_at_zero.ok());
  CHECK(r.lipschitz_constant > 1e3);
}

TEST_CASE("negative profile fails non-negativity") {
  const ProfileReport r = validate_profile(custom([](double t) { return -0.5 * t / (1.0 + t); },
                                                  [](double t) { return -0.5 / ((1.0 + t) * (1.0 + t)); }, "neg"));
  CHECK_FALSE(r.non_negative.ok());
  CHECK_FALSE(r.passes);
}

TEST_CASE("non-finite evaluation is reported with its argument") {
  const WeingartenProfile bad = custom([](double t) { return t > 1.0 ? std::nan("") : t / (1.0 + t); },
                                       [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, "bad");
  try {
    validate_profile(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("profile evaluation failure") != std::string::npos);
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE("narrow sampling needs an explicit override") {
  Sampling s;
  s.t_max = 10.0;
  CHECK_THROWS_AS(validate_profile(rational_profile(1.0), s), Error);
}

TEST_CASE("square-root envelope constant") {
  // sqrt(t) / (1 + t) peaks at t = 1 with value 1/2.
  CHECK(sqrt_envelope_constant(rational_profile(1.0)) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sqrt_envelope_constant(rational_profile(0.9)) == doctest::Approx(0.45).epsilon(1e-9));
  CHECK_THROWS_WITH_AS(sqrt_envelope_constant(rational_profile(2.5)), doctest::Contains("no sub-square-root envelope"),
                       Error);
}

TEST_CASE("adapted phi matches the closed-form antiderivative") {
  for (double a : {0.25, 1.0, 1.5}) {
    const WeingartenProfile p = rational_profile(a);
    for (double r : {1e-7, 1e-3, 0.1, 1.0, 2.5, 40.0}) {
      const double exact = a * (std::atan(r) + r / (1.0 + r * r));
      CHECK(std::abs(adapted_phi(p, r) - exact) <= 1e-10);
    }
    CHECK(adapted_phi(p, 1.0) == doctest::Approx(a * (kPi / 4.0 + 0.5)).epsilon(1e-12));
    CHECK(std::abs(adapted_phi(p, std::numeric_limits<double>::infinity()) - a * kPi / 2.0) <= 1e-10);
    CHECK(adapted_phi(p, 0.0) == 0.0);
  }
}

TEST_CASE("adapted phi is monotone for non-decreasing profiles") {
  const WeingartenProfile p = rational_profile(1.0);
  double prev = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double v = adapted_phi(p, 0.05 * k);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(adapted_phi(p, -1.0), Error);
}

TEST_CASE("derivative is consistent with evaluation") {
  for (const auto& p : {rational_profile(0.7), finite_growth_profile()}) {
    for (double t : {0.01, 0.3, 1.0, 7.0, 100.0}) {
      const double h = 1e-4 * t;
      const double fd = (p.eval(t + h) - p.eval(t - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(p.deriv(t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("growth limit and admissible tau") {
  CHECK(growth_limit(zero_profile()).diverges);
  CHECK(growth_limit(rational_profile(1.0)).diverges);
  CHECK(growth_limit(rational_profile(0.5)).diverges);
  CHECK(admissible_tau_range(zero_profile()).lower == 0.0);
  CHECK(admissible_tau_range(rational_profile(1.0)).lower == 0.0);

  const GrowthLimit finite = growth_limit(finite_growth_profile());
  CHECK_FALSE(finite.diverges);
  CHECK(finite.value == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(admissible_tau_range(finite_growth_profile()).lower == doctest::Approx(0.25).epsilon(1e-6));

  const TauInterval r = admissible_tau_range(GrowthLimit{false, 4.0});
  CHECK(r.lower == 0.25);
  CHECK_FALSE(r.contains(0.2));
  CHECK(r.contains(0.3));
}

TEST_CASE("finite growth limit is weak-hypotheses mode") {
  const ProfileReport r = validate_profile(finite_growth_profile());
  CHECK_FALSE(r.passes);
  CHECK_FALSE(r.limsup_at_infinity.ok());
  CHECK(r.weak_hypotheses());
}

TEST_CASE("oscillating tail is inconclusive") {
  const WeingartenProfile osc = custom([](double t) { return std::sqrt(t) - (2.0 + std::sin(std::log(t))); },
                                       [](double) { return 0.0; }, "osc");
  CHECK_THROWS_WITH_AS(growth_limit(osc), doctest::Contains("inconclusive limit"), Error);
}

TEST_CASE("registry") {
  CHECK(make_profile("zero").eval(3.0) == 0.0);
  CHECK(make_profile("rational(0.5)").eval(1.0) == doctest::Approx(0.25));
  CHECK_THROWS_WITH_AS(make_profile("cubic"), doctest::Contains("valid: zero, rational(a), custom-table"), Error);
  CHECK_THROWS_AS(make_profile("custom-table"), Error);
  CHECK_THROWS_AS(make_profile("rational(x)"), Error);
}

TEST_CASE("table profile interpolates monotone data") {
  std::vector<std::pair<double, double>> knots;
  for (int k = -40; k <= 40; ++k) {
    const double t = std::pow(10.0, k / 10.0);
    knots.emplace_back(t, t / (1.0 + t));
  }
  const WeingartenProfile p = make_profile("custom-table", knots);
  CHECK(p.eval(0.0) == 0.0);
  for (double t : {0.002, 0.05, 0.7, 3.0, 90.0}) CHECK(p.eval(t) == doctest::Approx(t / (1.0 + t)).epsilon(1e-3));
  // Monotone data stays monotone.
  double prev = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double v = p.eval(0.02 * k);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(table_profile({{1.0, 0.5}, {1.0, 0.6}}), Error);
}
