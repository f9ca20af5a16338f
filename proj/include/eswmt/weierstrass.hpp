#pragma once

// Minimal immersions from Weierstrass data (h, G):
//   Phi = ( h (1 - G^2) / 2, i h (1 + G^2) / 2, h G ),  X(z) = Re int_{z0}^{z} Phi(w) dw.
// With this normalisation the induced metric is lambda_hat |dz|^2 with
// lambda_hat = (|h| (1 + |G|^2) / 2)^2 and the stereographic Gauss map of the
// patch (normal X_u x X_v) is G itself.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eswmt/surface.hpp"

namespace eswmt {

using HoloFn = std::function<Complex(Complex)>;

struct SingularPoint {
  Complex location;
  int order = 1;
};

struct WeierstrassData {
  std::string name;
  HoloFn h;   // holomorphic factor
  HoloFn G;   // meromorphic Gauss map
  HoloFn dG;  // G'
  std::vector<SingularPoint> poles_of_G;
  std::vector<SingularPoint> zeros_of_h;
  std::vector<Complex> punctures;  // points removed from the domain (e.g. poles of h)
};

WeierstrassData enneper_data();             // h = 1, G = z
WeierstrassData catenoid_data();            // h = 1/z^2, G = z on C \ {0}
WeierstrassData helicoid_associate_data();  // h = i/z^2, G = z on C \ {0}
WeierstrassData plane_data(Complex g0 = {0.0, 0.0});  // h = 1, G = g0
WeierstrassData weierstrass_preset(const std::string& name);
// h = hc z^hm, G = gc z^gm with integer exponents; zeros, poles and the
// puncture at the origin are derived from the signs of the exponents.
WeierstrassData monomial_data(Complex hc, int hm, Complex gc, int gm);

using Phi = std::array<Complex, 3>;

// Throws "irregular point" at a pole of G that no zero of h covers.
Phi make_phi(const WeierstrassData& data, Complex z);

// |((Phi, Phi))| / (|phi1|^2 + |phi2|^2 + |phi3|^2).
double null_defect(const Phi& phi);

struct RegularityReport {
  bool regular = true;
  std::vector<Complex> branch_points;     // zeros of h with order > 2 (pole order of G)
  std::vector<Complex> irregular_points;  // poles of G with zero order < 2 m
  std::string summary;
};

RegularityReport regularity_check(const WeierstrassData& data);

// Parameter chart for the integration grid.
enum class ChartKind {
  cartesian,  // z = u + i v on a rectangle
  polar,      // z = exp(u + i v), v periodic: an annulus r in [e^{u0}, e^{u1}]
};

struct ComplexGrid {
  ChartKind kind = ChartKind::cartesian;
  double u0 = -1.0, u1 = 1.0;
  double v0 = -1.0, v1 = 1.0;  // ignored for polar charts
  std::size_t nu = 65, nv = 65;

  static ComplexGrid rectangle(double x0, double x1, double y0, double y1, std::size_t nx, std::size_t ny);
  static ComplexGrid annulus(double r_inner, double r_outer, std::size_t nr, std::size_t nphi);

  Grid2 grid() const;
  Complex z(double u, double v) const;
  Complex dz_dw(double u, double v) const;  // chart derivative, w = u + i v
};

struct ImmersionResult {
  ParametricPatch patch;           // X samples only; forms by finite differences
  std::optional<Vec3> period;      // Re of the loop integral around the annulus core
  double period_spread = 0.0;      // max deviation of periods over all rings
  double path_discrepancy = 0.0;   // sup |X_row-first - X_column-first|
};

ImmersionResult integrate_immersion(const WeierstrassData& data, Complex basepoint, const ComplexGrid& grid,
                                    Exec exec = Exec::parallel);

struct MetricCurvature {
  Grid2 grid;                   // polar: (r, phi)
  std::vector<double> lambda;   // lambda_hat
  std::vector<double> K;
  double quadrature = 0.0;      // int K dA over r_inner <= |z| <= r_outer
  double inner_tail = 0.0;      // 0 < |z| < r_inner
  double outer_tail = 0.0;      // |z| > r_outer
  double decay_exponent = 0.0;  // fitted p in ring(r) ~ r^-p at the outer edge
  double total() const { return quadrature + inner_tail + outer_tail; }
};

// Fields on a polar grid plus total curvature with power-law radial tails
// (left at zero when `tails` is false). r_inner = 0 means the disk is
// integrated through the origin.
MetricCurvature metric_curvature(const WeierstrassData& data, double r_inner, double r_outer, std::size_t n_r = 129,
                                 std::size_t n_phi = 128, Exec exec = Exec::parallel, bool tails = true);

}  // namespace eswmt
