#pragma once

// Global invariants of complete examples: total curvature with tails, the
// Jorge-Meeks count, end expansions, area growth, and the second-form budget.

#include <functional>
#include <string>
#include <vector>

#include "eswmt/profile.hpp"
#include "eswmt/rotational.hpp"
#include "eswmt/weierstrass.hpp"

namespace eswmt {

enum class TailMode { turning_angle, radial_decay, none };
const char* to_string(TailMode m);
TailMode parse_tail_mode(const std::string& s);

struct CurvatureBudget {
  double quadrature_value = 0.0;
  double tail_estimate = 0.0;
  double total = 0.0;
  int genus = 0;
  int ends = 1;
  double jm_target = 0.0;
  double deficit = 0.0;
  TailMode mode = TailMode::none;
  double limit_angle_fit = 0.0;  // fitted theta at infinity (turning-angle mode)

  void set_topology(int genus, int ends);
};

// Two-ended rotational surface from its half generatrix (arc length from the
// neck), truncated at arc length arc_R on both sides.
CurvatureBudget total_curvature(const WeingartenProfile& p, const Generatrix& half, double arc_R, TailMode mode);

// Weierstrass surface over r_inner <= |z| <= R; turning-angle mode is not
// available here.
CurvatureBudget total_curvature(const WeierstrassData& data, double r_inner, double R, TailMode mode);

struct JorgeMeeksReport {
  bool pass = false;
  double target = 0.0;
  double deficit = 0.0;
  std::string regime;
  bool ambiguous_topology = false;
  std::string note;
};

JorgeMeeksReport jorge_meeks_check(const CurvatureBudget& budget, int genus, int ends, double tol = 1e-3);

// 2 pi (chi - sum of area-growth constants).
double shiohama_total_curvature(int euler_characteristic, double growth_sum);

struct EndSample {
  double x1 = 0.0, x2 = 0.0, height = 0.0;
  double r() const;
};

// Graph samples of a rotational end over the annulus R0 <= rho <= R1
// (log-spaced radii); the bottom end is the mirror image z -> -z.
std::vector<EndSample> rotational_end_samples(const Generatrix& half, bool top, double R0, double R1,
                                              std::size_t n_r = 64, std::size_t n_phi = 16);

// Generatrix sample at a given radius on the monotone branch beyond the neck.
GeneratrixSample sample_at_rho(const Generatrix& half, double rho);

struct EndFit {
  double R0 = 0.0, R1 = 0.0;
  double beta = 0.0, a0 = 0.0, a1 = 0.0, a2 = 0.0;
  double residual = 0.0;      // RMS
  double beta_inner = 0.0;    // refit on [R0, sqrt(R0 R1)]
  double beta_outer = 0.0;    // refit on [sqrt(R0 R1), R1]
  bool stable = false;        // |beta_inner - beta_outer| <= 5% of |beta|
};

// Least squares for height = beta log r + a0 + (a1 x1 + a2 x2) / r^2.
// Throws "annulus too thin" when the samples span less than a decade or the
// design matrix is ill-conditioned.
EndFit fit_end_expansion(const std::vector<EndSample>& samples, double R0, double R1);

enum class GrowthSign { positive, negative, bounded, indeterminate };
const char* to_string(GrowthSign s);

struct GrowthSignReport {
  GrowthSign sign = GrowthSign::indeterminate;
  double inf = 0.0, sup = 0.0;  // of height - a0 over the outer half (log r)
};

GrowthSignReport growth_sign_check(const std::vector<EndSample>& samples, double a0);

struct AreaGrowth {
  std::vector<double> radii;
  std::vector<double> ratios;  // A(R) / (pi R^2)
  double constant = 0.0;       // extrapolated limit
};

// Ratios A(R)/(pi R^2) extrapolated with c + (b log R + d) / R^2 on the last
// three radii. Throws "inconclusive" on a non-monotone ratio sequence.
AreaGrowth area_growth_constant(const std::function<double(double)>& area, const std::vector<double>& radii);
// Area of one end of a rotational surface inside the cylinder of radius R.
AreaGrowth area_growth_constant(const Generatrix& half, const std::vector<double>& radii);

struct SecondFormBudget {
  double c_bar = 0.0;
  double integral_H2 = 0.0;
  double integral_K = 0.0;
  double integral_II2 = 0.0;  // int (4 H^2 - 2 K)
  double lhs = 0.0;           // (1 - c_bar^2) int H^2
  double rhs = 0.0;           // -c_bar^2 int K
  double margin = 0.0;        // rhs - lhs
  bool inequality_holds = false;
  double neck_II = 0.0;       // |II| at the neck
  double outer_II = 0.0;      // sup |II| over the outermost band
};

// Two-ended rotational surface truncated at arc_R, with tails.
SecondFormBudget second_form_budget(const WeingartenProfile& p, const Generatrix& half, double arc_R, double c_bar);

struct GaussBonnet {
  double curvature_integral = 0.0;  // finite differences of the revolved mesh
  double boundary_term = 0.0;       // geodesic curvature of the boundary circles
  double euler_characteristic = 0.0;
  double defect = 0.0;              // |sum - 2 pi chi|
};

// Annulus |arc| <= arc_R of a two-ended rotational surface, curvature taken
// from finite differences of the mesh only.
GaussBonnet gauss_bonnet_annulus(const WeingartenProfile& p, double tau, double arc_R, std::size_t n_arc = 801,
                                 std::size_t n_phi = 256, Exec exec = Exec::parallel);

}  // namespace eswmt
