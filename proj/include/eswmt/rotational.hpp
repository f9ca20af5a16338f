#pragma once

// Rotational ESWMT surfaces (special catenoids M_tau).
//
// The generatrix lives in the (rho, z) half-plane and is integrated with the
// turning angle theta of its unit tangent (cos theta, sin theta). With the
// normal pointing toward the axis on the upper half,
//   kappa_m = theta'              (meridian curvature, in arc length)
//   kappa_p = sin(theta) / rho    (parallel curvature)
// and H = (kappa_m + kappa_p) / 2 >= 0. On the minimal catenoid kappa_m < 0
// above the neck.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "eswmt/ode.hpp"
#include "eswmt/profile.hpp"
#include "eswmt/surface.hpp"

namespace eswmt {

struct GeneratrixSample {
  double arc = 0.0;    // signed arc length from the neck
  double sigma = 0.0;  // conformal coordinate, d sigma = d arc / rho
  double rho = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double k_meridian = 0.0;
  double k_parallel = 0.0;

  double mean_curvature() const { return 0.5 * (k_meridian + k_parallel); }
  double gauss_curvature() const { return k_meridian * k_parallel; }
  double skew_curvature() const {
    const double t = 0.5 * (k_meridian - k_parallel);
    return t * t;
  }
};

// Which sample coordinate parametrises the curve.
enum class Chart { arc_length, conformal };

struct Generatrix {
  double tau = 0.0;
  std::vector<GeneratrixSample> samples;
  std::string profile_id;
  Chart chart = Chart::arc_length;

  double parameter(std::size_t i) const { return chart == Chart::arc_length ? samples[i].arc : samples[i].sigma; }
  // d arc / d parameter
  double speed(std::size_t i) const { return chart == Chart::arc_length ? 1.0 : samples[i].rho; }
};

struct RootOptions {
  double max_bracket = 1e8;
  int max_iterations = 200;
  std::function<void(double)> on_iterate;  // sees every iterate
};

struct RootSolve {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Solves (x + kp)/2 = f(((x - kp)/2)^2) for the meridian curvature x. The
// left side minus the right side is strictly increasing when 4 t f'^2 < 1, so
// the root is unique; guarded Newton with bisection fallback on an expanded
// bracket.
RootSolve meridian_from_parallel(const WeingartenProfile& p, double k_parallel,
                                 std::optional<double> hint = std::nullopt, const RootOptions& opts = {});

// Half generatrix on [0, arc_max] starting at the neck (rho, z, theta) =
// (tau, 0, pi/2); adaptive step-doubling RK4 unless control.fixed_step > 0.
Generatrix integrate_generatrix(const WeingartenProfile& p, double tau, double arc_max,
                                const StepControl& control = {});

// Uniformly sampled generatrix in the chosen chart on [s_lo, s_hi] (either
// may be negative: integration runs backward through the neck). Each output
// interval is covered by `substeps` fixed RK4 steps.
Generatrix sample_generatrix(const WeingartenProfile& p, double tau, Chart chart, double s_lo, double s_hi,
                             std::size_t intervals, std::size_t substeps = 8);

// Appends the reflection z -> -z; the neck sample is not duplicated.
Generatrix mirror_extend(const Generatrix& half);

// X(s, phi) = (rho cos phi, rho sin phi, z) with forms and curvatures filled
// in from (theta, kappa_m, kappa_p).
ParametricPatch revolve(const Generatrix& g, std::size_t n_theta, Exec exec = Exec::parallel);

struct BandCurvature {
  double turning_angle = 0.0;  // 2 pi (cos theta(l1) - cos theta(l2))
  double quadrature = 0.0;     // Simpson in arc length x trapezoid in phi of K dA
};

// Total curvature of the band arc in [l1, l2]. The exact value uses the
// sampled turning angle; the quadrature re-samples the profile uniformly.
BandCurvature band_total_curvature(const WeingartenProfile& p, const Generatrix& g, double l1, double l2,
                                   std::size_t n_phi = 32);

// Linear interpolation of a sample field at an arc-length value.
GeneratrixSample sample_at_arc(const Generatrix& g, double arc);

enum class EndBehavior { proper, strip, undetermined };
const char* to_string(EndBehavior b);

// Whether the height keeps growing (log-type, all coordinates proper) or
// levels off inside a strip, judged from the outer decade of rho.
EndBehavior classify_end_behavior(const Generatrix& half);

// Admissibility checks on a constructed curve.
struct GeneratrixDiagnostics {
  double min_rho = 0.0;
  double min_rho_arc = 0.0;
  double convexity_violation = 0.0;  // most negative discrete d^2 rho / dz^2
  double weingarten_residual = 0.0;  // sup |H - f(q)|
  double max_gauss_curvature = 0.0;  // should be <= 0
  double arc_length_defect = 0.0;    // sup | |(rho, z)'| - 1 |
};

GeneratrixDiagnostics diagnose(const WeingartenProfile& p, const Generatrix& g);

}  // namespace eswmt
