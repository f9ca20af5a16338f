#include "eswmt/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "eswmt/analysis.hpp"
#include "eswmt/codazzi.hpp"
#include "eswmt/error.hpp"
#include "eswmt/kenmotsu.hpp"
#include "eswmt/profile.hpp"
#include "eswmt/rotational.hpp"
#include "eswmt/weierstrass.hpp"

namespace eswmt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFamilyA[] = {0.25, 0.5, 1.0};
constexpr double kFamilyTau[] = {0.5, 1.0, 2.0};
constexpr double kHalfArc = 1100.0;   // integrated arc length per side
constexpr double kTruncation = 200.0;  // arc length of the global quadratures

std::string tag(const char* what, double a, double tau) {
  std::ostringstream os;
  os << what << "[a=" << a << ",tau=" << tau << "]";
  return os.str();
}

WeingartenProfile sqrt_profile() {
  WeingartenProfile p;
  p.eval = [](double t) { return 0.5 * std::sqrt(t); };
  p.deriv = [](double t) { return 0.25 / std::sqrt(t); };
  p.label = "sqrt(t)/2";
  return p;
}

void profile_gate(CriterionResult& r) {
  const ProfileReport good = validate_profile(rational_profile(1.0));
  r.checks.push_back(check_holds("rational(1) passes", good.passes, good.sup_ellipticity));
  r.checks.push_back(check_near("rational(1) sup 4tf'^2", good.sup_ellipticity, 27.0 / 64.0, 1e-6));
  const ProfileReport steep = validate_profile(rational_profile(1.6));
  r.checks.push_back(check_holds("rational(1.6) fails", !steep.passes, steep.sup_ellipticity));
  r.checks.push_back(check_near("rational(1.6) sup 4tf'^2", steep.sup_ellipticity, 1.08, 1e-3));
  const ProfileReport root = validate_profile(sqrt_profile());
  r.checks.push_back(
      check_holds("sqrt(t)/2 fails Lipschitz at 0", !root.lipschitz_at_zero.ok(), root.lipschitz_constant));
}

// sup over the samples with |z| <= 3 of |rho - cosh z| / cosh z.
double catenoid_error(const Generatrix& g) {
  double err = 0.0;
  for (const auto& s : g.samples) {
    if (std::abs(s.z) > 3.0) continue;
    err = std::max(err, std::abs(s.rho - std::cosh(s.z)) / std::cosh(s.z));
  }
  return err;
}

void catenoid_oracle(CriterionResult& r) {
  const WeingartenProfile zero = zero_profile();
  const double arc = std::sinh(3.0) + 0.5;
  const Generatrix adaptive = mirror_extend(integrate_generatrix(zero, 1.0, arc));
  r.checks.push_back(check_at_most("adaptive relative error on |z| <= 3", catenoid_error(adaptive), 1e-6));
  StepControl coarse, fine;
  coarse.fixed_step = 0.2;
  fine.fixed_step = 0.1;
  const double e_coarse = catenoid_error(mirror_extend(integrate_generatrix(zero, 1.0, arc, coarse)));
  const double e_fine = catenoid_error(mirror_extend(integrate_generatrix(zero, 1.0, arc, fine)));
  r.checks.push_back(check_at_least("error ratio on halving the step", e_coarse / e_fine, 8.0));
}

void weingarten_residuals(CriterionResult& r) {
  for (double a : kFamilyA) {
    const WeingartenProfile p = rational_profile(a);
    for (double tau : kFamilyTau) {
      const Generatrix half = integrate_generatrix(p, tau, kHalfArc);
      const GeneratrixDiagnostics d = diagnose(p, mirror_extend(half));
      const Generatrix band = sample_generatrix(p, tau, Chart::arc_length, -10.0, 10.0, 400);
      const ParametricPatch patch = revolve(band, 64);
      const double patch_residual = weingarten_residual(patch, p).sup;
      double patch_K = -std::numeric_limits<double>::infinity();
      for (double k : patch.K) patch_K = std::max(patch_K, k);
      r.checks.push_back(
          check_at_most(tag("sup |H - f(q)|", a, tau), std::max(d.weingarten_residual, patch_residual), 1e-8));
      r.checks.push_back(check_at_most(tag("sup K", a, tau), std::max(d.max_gauss_curvature, patch_K), 1e-10));
    }
  }
}

void jorge_meeks(CriterionResult& r) {
  const CurvatureBudget plane = total_curvature(plane_data(), 0.0, 10.0, TailMode::radial_decay);
  r.checks.push_back(check_near("plane total curvature", plane.total, 0.0, 0.0));
  auto rotational = [&](const WeingartenProfile& p, double tau, const std::string& name) {
    const Generatrix half = integrate_generatrix(p, tau, kHalfArc);
    const CurvatureBudget b = total_curvature(p, half, kTruncation, TailMode::turning_angle);
    r.checks.push_back(check_near(name, b.total, -4.0 * kPi, 1e-3));
  };
  rotational(zero_profile(), 1.0, "catenoid total curvature");
  for (double a : kFamilyA)
    for (double tau : kFamilyTau) rotational(rational_profile(a), tau, tag("total curvature", a, tau));
  const CurvatureBudget enneper = total_curvature(enneper_data(), 0.0, 100.0, TailMode::radial_decay);
  r.checks.push_back(check_near("Enneper total curvature (quadrature)", enneper.total, -4.0 * kPi, 1e-3));
}

void codazzi_pair(CriterionResult& r) {
  for (double a : kFamilyA) {
    const WeingartenProfile p = rational_profile(a);
    for (double tau : kFamilyTau) {
      const Generatrix band = sample_generatrix(p, tau, Chart::arc_length, -5.0, 5.0, 200);
      const ParametricPatch patch = revolve(band, 64);
      const PairInvariants inv = pair_invariants(adapted_pair(patch, p));
      r.checks.push_back(check_at_most(tag("sup |H_f|", a, tau), inv.sup_mean, 1e-10));
      r.checks.push_back(check_at_most(tag("sup |K_f + q|", a, tau), inv.sup_gauss, 1e-10));
      r.checks.push_back(check_near(tag("umbilic mask mismatch", a, tau), static_cast<double>(inv.mask_mismatch), 0, 0));
    }
  }
  for (double a : kFamilyA) {
    const SimonsRefinement ref = simons_refinement(rational_profile(a), 1.0, 0.5, 3.0, 40, 3);
    r.checks.push_back(check_at_least(tag("Simons residual ratio per halving", a, 1.0), ref.min_ratio(), 3.5));
  }
}

void kenmotsu_roundtrip_criterion(CriterionResult& r) {
  const WeingartenProfile p = rational_profile(1.0);
  std::vector<double> integrability;
  for (std::size_t n : {41, 81, 161}) {
    const RoundTrip rt = kenmotsu_roundtrip(p, 1.0, 0.2, 3.0, n, 2 * (n - 1));
    integrability.push_back(rt.integrability_sup);
    if (n == 161) r.checks.push_back(check_at_most("round-trip Hausdorff (161 x 320)", rt.hausdorff, 1e-4));
  }
  for (std::size_t k = 0; k + 1 < integrability.size(); ++k) {
    r.checks.push_back(
        check_at_least("integrability residual ratio " + std::to_string(k), integrability[k] / integrability[k + 1], 3.5));
  }
  const Generatrix catenoid = sample_generatrix(zero_profile(), 1.0, Chart::conformal, -1.0, 1.0, 40);
  bool refused = false;
  try {
    recover_immersion(rotational_kenmotsu_field(catenoid, 32));
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::config &&
              std::string(e.what()).find("mean curvature vanishes") != std::string::npos;
  }
  r.checks.push_back(check_holds("minimal input refused", refused, refused ? 1.0 : 0.0));
}

double band_dilatation(const Generatrix& conformal, std::size_t nphi) {
  return dilatation(beltrami_mu(rotational_kenmotsu_field(conformal, nphi)));
}

void quasiconformality(CriterionResult& r) {
  const WeingartenProfile p = rational_profile(1.0);
  const Generatrix core = sample_generatrix(p, 1.0, Chart::conformal, -3.0, 3.0, 240);
  const BeltramiField mu = beltrami_mu(rotational_kenmotsu_field(core, 64));
  r.checks.push_back(check_at_most("sup |mu|", mu.sup, 0.5 + 1e-3));
  const double gamma = dilatation(mu);
  r.checks.push_back(check_at_most("dilatation", gamma, 3.0 + 1e-2));
  double previous = gamma;
  for (double s0 : {3.0, 6.0, 9.0}) {
    const double g = band_dilatation(sample_generatrix(p, 1.0, Chart::conformal, s0, s0 + 3.0, 120), 64);
    std::ostringstream name;
    name << "dilatation on sigma in [" << s0 << "," << s0 + 3.0 << "] below the previous band";
    r.checks.push_back(check_at_most(name.str(), g, std::nextafter(previous, 0.0)));
    previous = g;
  }
  r.checks.push_back(check_at_most("outermost band dilatation - 1", previous - 1.0, 1e-2));
  const Generatrix end = sample_generatrix(p, 1.0, Chart::conformal, 0.0, 12.0, 480);
  const MoriReport mori = mori_bound_check(rotational_end_disk(end, 0.0));
  r.checks.push_back(check_near("Mori violations", static_cast<double>(mori.violations), 0.0, 0.0));
  r.checks.push_back(check_at_most("Mori worst ratio", mori.worst_ratio, 1.0));
}

void end_asymptotics(CriterionResult& r) {
  const Generatrix catenoid = integrate_generatrix(zero_profile(), 1.0, kHalfArc);
  const EndFit fit = fit_end_expansion(rotational_end_samples(catenoid, true, 10.0, 1000.0), 10.0, 1000.0);
  r.checks.push_back(check_near("catenoid beta", fit.beta, 1.0, 1e-2));
  r.checks.push_back(check_near("catenoid a0", fit.a0, std::log(2.0), 2e-2 * std::log(2.0)));
  r.checks.push_back(check_at_most("catenoid inner/outer beta spread", std::abs(fit.beta_inner - fit.beta_outer),
                                   5e-2 * std::abs(fit.beta)));
  const AreaGrowth area = area_growth_constant(catenoid, {10.0, 30.0, 100.0, 300.0, 1000.0});
  r.checks.push_back(check_near("catenoid area ratio at R = 1000", area.ratios.back(), 1.0, 2e-2));
  for (double a : kFamilyA) {
    const WeingartenProfile p = rational_profile(a);
    for (double tau : kFamilyTau) {
      const Generatrix half = integrate_generatrix(p, tau, kHalfArc);
      const EndFit top = fit_end_expansion(rotational_end_samples(half, true, 10.0, 1000.0), 10.0, 1000.0);
      const EndFit bottom = fit_end_expansion(rotational_end_samples(half, false, 10.0, 1000.0), 10.0, 1000.0);
      r.checks.push_back(check_holds(tag("ends grow in opposite directions", a, tau),
                                     top.beta > 0.0 && bottom.beta < 0.0, top.beta * bottom.beta));
      if (a == 1.0 && tau == 1.0) {
        const AreaGrowth ag = area_growth_constant(half, {10.0, 30.0, 100.0, 300.0, 1000.0});
        r.checks.push_back(check_near(tag("area ratio at R = 1000", a, tau), ag.ratios.back(), 1.0, 2e-2));
      }
    }
  }
}

void second_form(CriterionResult& r) {
  const Generatrix catenoid = integrate_generatrix(zero_profile(), 1.0, kHalfArc);
  const SecondFormBudget c = second_form_budget(zero_profile(), catenoid, kTruncation, 0.0);
  r.checks.push_back(check_near("catenoid int |II|^2", c.integral_II2, 8.0 * kPi, 1e-2 * 8.0 * kPi));
  const WeingartenProfile p = rational_profile(1.0);
  const Generatrix half = integrate_generatrix(p, 1.0, kHalfArc);
  const SecondFormBudget m = second_form_budget(p, half, kTruncation, 0.5);
  r.checks.push_back(check_at_least("margin of (1 - c^2) int H^2 <= -c^2 int K", m.margin, 1e-6));
  r.checks.push_back(check_at_most("outer |II| / neck |II|", m.outer_II / m.neck_II, 1e-2));
}

void gauss_bonnet(CriterionResult& r) {
  for (double a : kFamilyA) {
    for (double tau : kFamilyTau) {
      const GaussBonnet gb = gauss_bonnet_annulus(rational_profile(a), tau, 5.0);
      r.checks.push_back(check_at_most(tag("Gauss-Bonnet defect", a, tau), gb.defect, 1e-3));
    }
  }
}

struct CriterionSpec {
  const char* title;
  double time_limit;
  void (*body)(CriterionResult&);
};

const CriterionSpec kCriteria[kCriterionCount] = {
    {"profile gate", 1.0, profile_gate},
    {"catenoid oracle", 1.0, catenoid_oracle},
    {"Weingarten residual", 10.0, weingarten_residuals},
    {"Jorge-Meeks total curvature", 30.0, jorge_meeks},
    {"Codazzi pair identities", 0.0, codazzi_pair},
    {"Kenmotsu round trip", 0.0, kenmotsu_roundtrip_criterion},
    {"quasiconformality", 0.0, quasiconformality},
    {"end asymptotics", 0.0, end_asymptotics},
    {"second-form budget", 0.0, second_form},
    {"Gauss-Bonnet cross-check", 0.0, gauss_bonnet},
};

Check make_check(std::string name, std::string relation, double value, double target, double tol, bool pass) {
  return Check{std::move(name), std::move(relation), value, target, tol, pass && std::isfinite(value)};
}

}  // namespace

Check check_near(std::string name, double value, double target, double tolerance) {
  return make_check(std::move(name), "|value - target| <= tolerance", value, target, tolerance,
                    std::abs(value - target) <= tolerance);
}

Check check_at_most(std::string name, double value, double bound) {
  return make_check(std::move(name), "value <= target", value, bound, 0.0, value <= bound);
}

Check check_at_least(std::string name, double value, double bound) {
  return make_check(std::move(name), "value >= target", value, bound, 0.0, value >= bound);
}

Check check_holds(std::string name, bool ok, double evidence) {
  Check c{std::move(name), "holds", evidence, 0.0, 0.0, ok};
  return c;
}

bool CriterionResult::numeric_pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriterionCount) fail_config("criterion id must be in 1.." + std::to_string(kCriterionCount));
  const CriterionSpec& spec = kCriteria[id - 1];
  CriterionResult r;
  r.id = id;
  r.title = spec.title;
  r.time_limit = spec.time_limit;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    spec.body(r);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool SuiteResult::numeric_pass() const {
  for (const auto& c : criteria)
    if (!c.numeric_pass()) return false;
  return criteria.size() == kCriterionCount;
}

bool SuiteResult::time_pass() const {
  for (const auto& c : criteria)
    if (!c.time_pass()) return false;
  return seconds < kSuiteTimeLimit;
}

SuiteResult run_suite(const std::function<void(const CriterionResult&)>& on_done) {
  SuiteResult s;
  const auto t0 = std::chrono::steady_clock::now();
  for (int id = 1; id <= kCriterionCount; ++id) {
    s.criteria.push_back(run_criterion(id));
    if (on_done) on_done(s.criteria.back());
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name},   {"relation", c.relation},   {"value", c.value},
          {"target", c.target}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

nlohmann::json to_json(const CriterionResult& r, bool timings) {
  nlohmann::json j = {{"id", r.id}, {"title", r.title}, {"pass", r.numeric_pass()}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  if (!r.error.empty()) j["error"] = r.error;
  if (timings) {
    j["seconds"] = r.seconds;
    if (r.time_limit > 0.0) j["time_limit"] = r.time_limit;
    j["time_pass"] = r.time_pass();
  }
  return j;
}

std::string summary_line(const CriterionResult& r) {
  const bool ok = r.numeric_pass() && r.time_pass();
  const Check* worst = nullptr;
  for (const auto& c : r.checks)
    if (!c.pass && !worst) worst = &c;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %2d %-28s checks=%zu time=%.2fs%s", ok ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.checks.size(), r.seconds,
                r.time_limit > 0.0 ? (r.time_pass() ? " (within limit)" : " (over limit)") : "");
  std::string line = buf;
  if (!r.error.empty()) line += " error: " + r.error;
  if (worst) {
    std::snprintf(buf, sizeof buf, " first failure: %s value=%.6g target=%.6g tol=%.3g", worst->name.c_str(),
                  worst->value, worst->target, worst->tolerance);
    line += buf;
  }
  return line;
}

}  // namespace eswmt
