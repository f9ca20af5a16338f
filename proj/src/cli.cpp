#include "eswmt/cli.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "eswmt/acceptance.hpp"
#include "eswmt/analysis.hpp"
#include "eswmt/codazzi.hpp"
#include "eswmt/config.hpp"
#include "eswmt/error.hpp"
#include "eswmt/io.hpp"
#include "eswmt/kenmotsu.hpp"
#include "eswmt/profile.hpp"
#include "eswmt/rotational.hpp"
#include "eswmt/weierstrass.hpp"

namespace eswmt {

const char* const kVersion = "1.0.0";

namespace {

using nlohmann::json;

struct Report {
  std::string command;
  json results = json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> artifacts;  // file suffix, content
  bool extra_failure = false;                                   // failure not expressed as a check

  bool pass() const {
    if (extra_failure) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

WeingartenProfile profile_from(const std::string& spec, const std::string& table_text) {
  RunConfig tmp;
  tmp.set("profile.table", table_text);
  return make_profile(spec, tmp.table("profile.table"));
}

WeingartenProfile profile_from(const RunConfig& cfg) {
  return profile_from(cfg.text("profile"), cfg.text("profile.table"));
}

// Profile recorded in a file's metadata, falling back to the configuration.
WeingartenProfile profile_from(const Metadata& meta, const RunConfig& cfg) {
  const auto it = meta.find("profile");
  if (it == meta.end()) return profile_from(cfg);
  const auto table = meta.find("profile.table");
  return profile_from(it->second, table == meta.end() ? "" : table->second);
}

Metadata profile_meta(const RunConfig& cfg) {
  Metadata m{{"profile", cfg.text("profile")}};
  if (!cfg.text("profile.table").empty()) m["profile.table"] = cfg.text("profile.table");
  return m;
}

// Half generatrix (arc >= 0) from a file or from the configuration.
struct HalfCurve {
  WeingartenProfile profile;
  Generatrix half;
};

HalfCurve half_curve(const RunConfig& cfg) {
  if (cfg.text("input").empty()) {
    WeingartenProfile p = profile_from(cfg);
    Generatrix half = integrate_generatrix(p, cfg.number("tau"), cfg.positive("arc_max"));
    return {std::move(p), std::move(half)};
  }
  LoadedGeneratrix loaded = parse_generatrix_csv(read_file(cfg.text("input")));
  if (loaded.generatrix.chart != Chart::arc_length) fail_config("an arc-length generatrix is required");
  HalfCurve out{profile_from(loaded.meta, cfg), {}};
  out.half = loaded.generatrix;
  out.half.samples.clear();
  for (const auto& s : loaded.generatrix.samples)
    if (s.arc >= 0.0) out.half.samples.push_back(s);
  if (out.half.samples.empty() || out.half.samples.front().arc != 0.0)
    fail_config("generatrix file does not contain the neck sample");
  return out;
}

Report profile_check(const RunConfig& cfg) {
  Report r;
  const WeingartenProfile p = profile_from(cfg);
  const ProfileReport rep = validate_profile(p);
  auto condition = [&](const char* name, const ConditionResult& c) {
    r.checks.push_back(check_holds(name, c.ok(), c.value));
    if (!c.detail.empty()) r.results["details"][name] = c.detail;
  };
  condition("f(0) = 0", rep.vanishes_at_zero);
  condition("4 t f'^2 < 1", rep.ellipticity);
  condition("f >= 0", rep.non_negative);
  condition("Lipschitz at 0", rep.lipschitz_at_zero);
  condition("liminf at 0", rep.liminf_at_zero);
  condition("limsup at infinity", rep.limsup_at_infinity);
  r.results["profile"] = p.label;
  r.results["sup_ellipticity"] = rep.sup_ellipticity;
  r.results["sup_ellipticity_at"] = rep.sup_ellipticity_at;
  r.results["c_bar"] = rep.c_bar;
  r.results["lipschitz_constant"] = rep.lipschitz_constant;
  r.results["weak_hypotheses"] = rep.weak_hypotheses();
  if (rep.growth) {
    r.results["growth_limit_diverges"] = rep.growth->diverges;
    if (!rep.growth->diverges) r.results["growth_limit"] = rep.growth->value;
    r.results["tau_lower_bound"] = admissible_tau_range(*rep.growth).lower;
  } else {
    r.results["growth_limit"] = rep.growth_detail;
  }
  return r;
}

Report catenoid_build(const RunConfig& cfg) {
  Report r;
  const WeingartenProfile p = profile_from(cfg);
  const double tau = cfg.number("tau");
  const double arc_max = cfg.positive("arc_max");
  const double truncation = cfg.positive("truncation");
  const double mesh_arc = cfg.positive("grid.mesh_arc");
  const std::size_t n_arc = cfg.count("grid.n_arc", 5);
  const std::size_t n_phi = cfg.count("grid.n_phi", 8);
  if (truncation > arc_max) fail_config("truncation must not exceed arc_max");

  const Generatrix half = integrate_generatrix(p, tau, arc_max);
  const Generatrix full = mirror_extend(half);
  const GeneratrixDiagnostics d = diagnose(p, full);
  r.checks.push_back(check_at_most("sup |H - f(q)|", d.weingarten_residual, cfg.positive("tol.residual")));
  r.checks.push_back(check_at_most("sup K", d.max_gauss_curvature, 1e-10));
  r.results["min_rho"] = d.min_rho;
  r.results["arc_length_defect"] = d.arc_length_defect;
  r.results["end_behavior"] = to_string(classify_end_behavior(half));

  CurvatureBudget budget = total_curvature(p, half, truncation, TailMode::turning_angle);
  const JorgeMeeksReport jm = jorge_meeks_check(budget, 0, 2, cfg.positive("tol.jm"));
  r.checks.push_back(check_near("total curvature", budget.total, jm.target, cfg.positive("tol.jm")));
  r.results["total_curvature"] = {{"quadrature", budget.quadrature_value},
                                  {"tail", budget.tail_estimate},
                                  {"limit_angle", budget.limit_angle_fit},
                                  {"regime", jm.regime}};

  const Generatrix band = sample_generatrix(p, tau, Chart::arc_length, -mesh_arc, mesh_arc, n_arc - 1);
  const ParametricPatch patch = revolve(band, n_phi);
  Metadata meta = profile_meta(cfg);
  r.artifacts.emplace_back("generatrix.csv", generatrix_csv(full, meta));
  r.artifacts.emplace_back("surface.csv", patch_csv(patch, meta));
  r.artifacts.emplace_back("surface.obj", patch_obj(patch));
  return r;
}

WeierstrassData weierstrass_data(const RunConfig& cfg, bool custom) {
  if (!custom) return weierstrass_preset(cfg.text("weierstrass.preset"));
  const Complex hc(cfg.number("weierstrass.h_re"), cfg.number("weierstrass.h_im"));
  const Complex gc(cfg.number("weierstrass.g_re"), cfg.number("weierstrass.g_im"));
  return monomial_data(hc, static_cast<int>(cfg.integer("weierstrass.h_power")), gc,
                       static_cast<int>(cfg.integer("weierstrass.g_power")));
}

Report weierstrass_build(const RunConfig& cfg, bool custom) {
  Report r;
  const WeierstrassData data = weierstrass_data(cfg, custom);
  const double r_inner = cfg.number("weierstrass.r_inner");
  const double r_outer = cfg.positive("weierstrass.r_outer");
  const std::size_t n_r = cfg.count("weierstrass.n_r", 5);
  const std::size_t n_phi = cfg.count("weierstrass.n_phi", 8);
  if (r_inner < 0.0 || !(r_inner < r_outer)) fail_config("weierstrass radii need 0 <= r_inner < r_outer");

  const RegularityReport reg = regularity_check(data);
  r.results["data"] = data.name;
  r.results["regularity"] = reg.summary;
  if (!reg.regular) fail_numeric("Weierstrass data not regular: " + reg.summary);

  const ComplexGrid grid = r_inner > 0.0 ? ComplexGrid::annulus(r_inner, r_outer, n_r, n_phi)
                                         : ComplexGrid::rectangle(-r_outer, r_outer, -r_outer, r_outer, n_r, n_r);
  for (const Complex& pt : data.punctures) {
    if (r_inner == 0.0 && std::abs(pt.real()) <= r_outer && std::abs(pt.imag()) <= r_outer)
      fail_config("the parameter square contains a puncture; set weierstrass.r_inner > 0");
  }
  ImmersionResult imm = integrate_immersion(data, grid.z(grid.u0, grid.v0), grid);
  r.checks.push_back(check_at_most("path independence", imm.path_discrepancy, 1e-8));
  if (imm.period) {
    r.results["period"] = {imm.period->x(), imm.period->y(), imm.period->z()};
    r.results["period_spread"] = imm.period_spread;
    r.results["closed"] = imm.period->norm() <= 1e-8;
  }
  fundamental_forms(imm.patch);
  curvatures(imm.patch);
  double sup_H = 0.0;
  for (double h : imm.patch.H) sup_H = std::max(sup_H, std::abs(h));
  r.results["sup_abs_H_finite_differences"] = sup_H;

  try {
    const CurvatureBudget b = total_curvature(data, r_inner, r_outer, TailMode::radial_decay);
    r.results["total_curvature"] = {{"quadrature", b.quadrature_value}, {"tail", b.tail_estimate}, {"total", b.total}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numeric) throw;
    // The grid is too small for the asymptotic regime; keep the finite part.
    const CurvatureBudget b = total_curvature(data, r_inner, r_outer, TailMode::none);
    r.results["total_curvature"] = {{"quadrature", b.quadrature_value}, {"tail", std::string("unresolved: ") + e.what()}};
  }

  const Metadata meta{{"weierstrass", data.name}};
  r.artifacts.emplace_back("surface.csv", patch_csv(imm.patch, meta));
  r.artifacts.emplace_back("surface.obj", patch_obj(imm.patch));
  return r;
}

Report kenmotsu_roundtrip_cmd(const RunConfig& cfg) {
  Report r;
  const WeingartenProfile p = profile_from(cfg);
  const auto [l1, l2] = cfg.range("kenmotsu.band");
  const RoundTrip rt = kenmotsu_roundtrip(p, cfg.number("tau"), l1, l2, cfg.count("kenmotsu.n_sigma", 9),
                                          cfg.count("kenmotsu.n_phi", 8));
  r.checks.push_back(check_at_most("Hausdorff distance after alignment", rt.hausdorff, cfg.positive("tol.roundtrip")));
  r.checks.push_back(check_at_most("dilatation", rt.dilatation, 3.0 + 1e-2));
  r.results["max_alignment_error"] = rt.max_alignment_error;
  r.results["integrability_sup"] = rt.integrability_sup;
  r.results["mu_sup"] = rt.mu_sup;
  r.results["mu_identity_residual"] = rt.mu_identity;
  r.results["hopf_route_discrepancy"] = rt.hopf_discrepancy;
  r.results["nodes"] = rt.nodes;
  return r;
}

Report verify_codazzi(const RunConfig& cfg) {
  Report r;
  ParametricPatch patch;
  WeingartenProfile p;
  if (cfg.text("input").empty()) {
    p = profile_from(cfg);
    const double mesh_arc = cfg.positive("grid.mesh_arc");
    const Generatrix band = sample_generatrix(p, cfg.number("tau"), Chart::arc_length, -mesh_arc, mesh_arc,
                                              cfg.count("grid.n_arc", 9) - 1);
    patch = revolve(band, cfg.count("grid.n_phi", 8));
  } else {
    LoadedPatch loaded = parse_patch_csv(read_file(cfg.text("input")));
    p = profile_from(loaded.meta, cfg);
    patch = std::move(loaded.patch);
    if (!patch.has_forms()) {
      fundamental_forms(patch);
      curvatures(patch);
    }
  }
  const double tol = cfg.positive("tol.codazzi");
  const AdaptedPair pair = adapted_pair(patch, p);
  const PairInvariants inv = pair_invariants(pair);
  r.checks.push_back(check_at_most("sup |H_f|", inv.sup_mean, tol));
  r.checks.push_back(check_at_most("sup |K_f + q|", inv.sup_gauss, tol));
  r.checks.push_back(check_near("umbilic mask mismatch", static_cast<double>(inv.mask_mismatch), 0.0, 0.0));
  const SimonsResidual s = simons_residual(pair);
  r.checks.push_back(check_at_most("Simons residual", s.sup, cfg.positive("tol.simons")));
  r.results["profile"] = p.label;
  r.results["comparability_constant"] = comparability_constant(pair);
  r.results["simons_l2"] = s.l2;
  r.results["simons_nodes_used"] = s.used;
  r.results["simons_nodes_excluded"] = s.excluded;
  r.results["intrinsic_vs_extrinsic_curvature"] = s.intrinsic_vs_extrinsic;
  return r;
}

Report verify_jm(const RunConfig& cfg, const std::string& preset) {
  Report r;
  const int genus = static_cast<int>(cfg.integer("verify.genus"));
  const int ends = static_cast<int>(cfg.integer("verify.ends"));
  CurvatureBudget b;
  if (!preset.empty()) {
    b = total_curvature(weierstrass_preset(preset), cfg.number("weierstrass.r_inner"),
                        cfg.positive("weierstrass.r_outer"), TailMode::radial_decay);
    r.results["surface"] = preset;
  } else {
    const HalfCurve c = half_curve(cfg);
    b = total_curvature(c.profile, c.half, cfg.positive("truncation"), TailMode::turning_angle);
    r.results["surface"] = c.profile.label;
    r.results["limit_angle"] = b.limit_angle_fit;
  }
  const JorgeMeeksReport jm = jorge_meeks_check(b, genus, ends, cfg.positive("tol.jm"));
  r.checks.push_back(check_near("total curvature", b.total, jm.target, cfg.positive("tol.jm")));
  r.results["tail_mode"] = to_string(b.mode);
  r.results["quadrature"] = b.quadrature_value;
  r.results["tail"] = b.tail_estimate;
  r.results["regime"] = jm.regime;
  r.results["ambiguous_topology"] = jm.ambiguous_topology;
  if (!jm.note.empty()) r.results["note"] = jm.note;
  return r;
}

Report fit_end(const RunConfig& cfg) {
  Report r;
  const HalfCurve c = half_curve(cfg);
  const std::string& end = cfg.text("fit.end");
  if (end != "top" && end != "bottom") fail_config("fit.end must be top or bottom");
  const auto [R0, R1] = cfg.range("fit.annulus");
  const auto samples = rotational_end_samples(c.half, end == "top", R0, R1);
  const EndFit fit = fit_end_expansion(samples, R0, R1);
  const GrowthSignReport sign = growth_sign_check(samples, fit.a0);
  r.checks.push_back(check_at_most("inner/outer growth-rate spread", std::abs(fit.beta_inner - fit.beta_outer),
                                   0.05 * std::abs(fit.beta)));
  r.results["beta"] = fit.beta;
  r.results["a0"] = fit.a0;
  r.results["a1"] = fit.a1;
  r.results["a2"] = fit.a2;
  r.results["rms_residual"] = fit.residual;
  r.results["beta_inner"] = fit.beta_inner;
  r.results["beta_outer"] = fit.beta_outer;
  r.results["growth_sign"] = to_string(sign.sign);
  return r;
}

Report verify_all(const RunConfig& cfg, std::ostream& out) {
  Report r;
  const bool timings = cfg.flag("output.timings");
  const SuiteResult suite = run_suite([&](const CriterionResult& c) { out << summary_line(c) << '\n'; });
  r.results["criteria"] = json::array();
  for (const auto& c : suite.criteria) {
    r.results["criteria"].push_back(to_json(c, timings));
    for (const auto& chk : c.checks) {
      Check prefixed = chk;
      prefixed.name = "criterion " + std::to_string(c.id) + ": " + chk.name;
      r.checks.push_back(prefixed);
    }
    if (!c.error.empty()) r.extra_failure = true;
  }
  if (timings) r.checks.push_back(check_at_most("suite runtime [s]", suite.seconds, kSuiteTimeLimit));
  if (!suite.time_pass()) r.extra_failure = true;
  out << (suite.time_pass() ? "PASS" : "FAIL") << " runtime < 2 min\n";
  return r;
}

std::string report_suffix(const std::string& command) {
  std::string s = command;
  for (char& ch : s)
    if (ch == ' ') ch = '_';
  return s + ".json";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::numeric: return kExitNumeric;
    case ErrorKind::io: return kExitIo;
  }
  return kExitNumeric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic Weingarten surface toolkit", "eswmt"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  // Global options are also accepted after the subcommand.
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("-c,--config", config_path, "configuration file (key = value text or JSON)");
  app.add_option("-s,--set", sets, "override a configuration key: key=value");
  std::string threads, out_prefix;
  app.add_option("--threads", threads, "OpenMP threads (configuration key threads)");
  app.add_option("-o,--out", out_prefix, "artifact prefix (configuration key output.prefix)");

  // Command-line flags mapped onto configuration keys.
  std::vector<std::pair<std::string, std::string>> flags;
  auto key_option = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&flags, key](const std::string& v) { flags.emplace_back(key, v); }, help);
  };

  CLI::App* profile = app.add_subcommand("profile", "Weingarten profile tools")->require_subcommand(1);
  CLI::App* profile_check_cmd = profile->add_subcommand("check", "test the admissibility conditions");
  key_option(profile_check_cmd, "--profile", "profile", "zero, rational(a) or custom-table");

  CLI::App* catenoid = app.add_subcommand("catenoid", "rotational surfaces")->require_subcommand(1);
  CLI::App* catenoid_build_cmd = catenoid->add_subcommand("build", "integrate and export a special catenoid");
  key_option(catenoid_build_cmd, "--profile", "profile", "Weingarten profile");
  key_option(catenoid_build_cmd, "--tau", "tau", "neck radius");
  key_option(catenoid_build_cmd, "--lmax", "arc_max", "arc length integrated on each side");

  CLI::App* weier = app.add_subcommand("weierstrass", "minimal surfaces from Weierstrass data")->require_subcommand(1);
  CLI::App* weier_build_cmd = weier->add_subcommand("build", "integrate and export a minimal immersion");
  key_option(weier_build_cmd, "--preset", "weierstrass.preset", "enneper, catenoid, helicoid-assoc, plane");
  std::string custom_path;
  weier_build_cmd->add_option("--custom", custom_path, "monomial data from the weierstrass.h_* and weierstrass.g_* keys, "
                              "optionally read from the given configuration file")
      ->expected(0, 1);

  CLI::App* kenmotsu = app.add_subcommand("kenmotsu", "Kenmotsu representation")->require_subcommand(1);
  CLI::App* kenmotsu_rt_cmd = kenmotsu->add_subcommand("roundtrip", "extract (G, H) and recover the immersion");
  key_option(kenmotsu_rt_cmd, "--profile", "profile", "Weingarten profile");
  key_option(kenmotsu_rt_cmd, "--tau", "tau", "neck radius");
  key_option(kenmotsu_rt_cmd, "--band", "kenmotsu.band", "arc-length band l1,l2");

  CLI::App* verify = app.add_subcommand("verify", "verification suites")->require_subcommand(1);
  CLI::App* verify_codazzi_cmd = verify->add_subcommand("codazzi", "adapted Codazzi pair identities");
  key_option(verify_codazzi_cmd, "--input", "input", "patch CSV");
  CLI::App* verify_jm_cmd = verify->add_subcommand("jm", "total curvature against the Jorge-Meeks count");
  key_option(verify_jm_cmd, "--surface", "input", "generatrix CSV");
  std::string jm_preset;
  verify_jm_cmd->add_option("--preset", jm_preset, "Weierstrass preset instead of a rotational surface");
  key_option(verify_jm_cmd, "--genus", "verify.genus", "genus");
  key_option(verify_jm_cmd, "--ends", "verify.ends", "number of ends");
  CLI::App* verify_all_cmd = verify->add_subcommand("all", "full acceptance suite");

  CLI::App* fit = app.add_subcommand("fit", "asymptotic fits")->require_subcommand(1);
  CLI::App* fit_end_cmd = fit->add_subcommand("end", "logarithmic growth of an end");
  key_option(fit_end_cmd, "--surface", "input", "generatrix CSV");
  key_option(fit_end_cmd, "--end", "fit.end", "top or bottom");
  key_option(fit_end_cmd, "--annulus", "fit.annulus", "radial range lo,hi");


  std::vector<const char*> argv{"eswmt"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
    const bool custom = weier_build_cmd->count("--custom") > 0;
    if (!custom_path.empty()) cfg.merge(RunConfig::from_file(custom_path));
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail_config("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flags) cfg.set(k, v);
    if (!threads.empty()) cfg.set("threads", threads);
    if (!out_prefix.empty()) cfg.set("output.prefix", out_prefix);
    set_thread_count(static_cast<int>(cfg.integer("threads")));
    // Output settings are validated before any computation starts.
    const std::string prefix = cfg.text("output.prefix");
    if (prefix.empty()) fail_config("output.prefix must not be empty");
    const bool timings = cfg.flag("output.timings");

    const auto t0 = std::chrono::steady_clock::now();
    Report report;
    if (profile_check_cmd->parsed()) {
      report = profile_check(cfg);
      report.command = "profile check";
    } else if (catenoid_build_cmd->parsed()) {
      report = catenoid_build(cfg);
      report.command = "catenoid build";
    } else if (weier_build_cmd->parsed()) {
      if (custom && weier_build_cmd->count("--preset")) fail_config("--preset and --custom are exclusive");
      report = weierstrass_build(cfg, custom);
      report.command = "weierstrass build";
    } else if (kenmotsu_rt_cmd->parsed()) {
      report = kenmotsu_roundtrip_cmd(cfg);
      report.command = "kenmotsu roundtrip";
    } else if (verify_codazzi_cmd->parsed()) {
      report = verify_codazzi(cfg);
      report.command = "verify codazzi";
    } else if (verify_jm_cmd->parsed()) {
      if (!jm_preset.empty() && !cfg.text("input").empty()) fail_config("--preset and --surface are exclusive");
      report = verify_jm(cfg, jm_preset);
      report.command = "verify jm";
    } else if (fit_end_cmd->parsed()) {
      report = fit_end(cfg);
      report.command = "fit end";
    } else if (verify_all_cmd->parsed()) {
      report = verify_all(cfg, out);
      report.command = "verify all";
    } else {
      fail_config("no command given");
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j = {{"tool", "eswmt"}, {"version", kVersion}, {"command", report.command}, {"config", cfg.to_json()}};
    j["results"] = report.results;
    j["checks"] = json::array();
    for (const auto& c : report.checks) j["checks"].push_back(to_json(c));
    j["pass"] = report.pass();
    if (timings) j["seconds"] = seconds;

    std::vector<std::string> written;
    for (const auto& [suffix, content] : report.artifacts) {
      const std::string path = prefix + "_" + suffix;
      write_atomic(path, content);
      written.push_back(path);
    }
    const std::string report_path = prefix + "_" + report_suffix(report.command);
    j["artifacts"] = written;
    write_json(report_path, j);

    if (report.command != "verify all") {
      for (const auto& c : report.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.value) << " (" << c.relation
            << ", target " << format_double(c.target);
        if (c.tolerance > 0.0) out << ", tolerance " << format_double(c.tolerance);
        out << ")\n";
      }
    }
    for (const auto& path : written) out << "wrote " << path << '\n';
    out << "report " << report_path << '\n';
    return report.pass() ? kExitOk : kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace eswmt
