#pragma once

// Gridded immersions X(u, v) with fundamental forms and curvature fields.
//
// Conventions used throughout the toolkit:
//   * unit normal N = X_u x X_v / |X_u x X_v|;
//   * II = L du^2 + 2M du dv + Nn dv^2 with L = X_uu . N, etc.;
//   * H = (E Nn - 2 F M + G L) / (2 (EG - F^2)), so the round sphere
//     parametrised with an inward normal has H = 1;
//   * on conformal charts I = 2 lambda |dz|^2, i.e. lambda = E / 2, and the
//     Hopf differential is Q = II(d_z, d_z) = ((L - Nn) - 2 i M) / 4, which
//     gives |Q| / lambda = sqrt(q).

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eswmt/exec.hpp"
#include "eswmt/profile.hpp"

namespace eswmt {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

struct Grid2 {
  std::vector<double> u;
  std::vector<double> v;
  bool periodic_v = false;  // v wraps: the node after the last is the first

  std::size_t nu() const { return u.size(); }
  std::size_t nv() const { return v.size(); }
  std::size_t size() const { return u.size() * v.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * v.size() + j; }
  double du() const;  // throws unless u is uniform
  double dv() const;  // period / nv when periodic

  static Grid2 uniform(double u0, double u1, std::size_t nu, double v0, double v1, std::size_t nv);
  // v in [0, 2 pi) with nv nodes, no duplicated seam.
  static Grid2 periodic(double u0, double u1, std::size_t nu, std::size_t nv);
  static Grid2 periodic(std::vector<double> u, std::size_t nv);
};

struct PatchDerivatives {
  std::function<Vec3(double, double)> xu, xv, xuu, xuv, xvv;
};

struct ParametricPatch {
  Grid2 grid;
  std::vector<Vec3> X;
  std::optional<PatchDerivatives> analytic;

  // First and second fundamental forms, normal.
  std::vector<double> E, F, G, L, M, Nn;
  std::vector<Vec3> normal;
  // Curvatures.
  std::vector<double> H, K, q, k1, k2;

  bool has_forms() const { return !E.empty(); }
  bool has_curvatures() const { return !H.empty(); }

  // E == G and F == 0 to relative tolerance at every node.
  bool is_conformal(double tol = 1e-8) const;
  double lambda(std::size_t idx) const { return 0.5 * E[idx]; }
};

ParametricPatch sample_patch(Grid2 grid, const std::function<Vec3(double, double)>& x,
                             std::optional<PatchDerivatives> analytic = std::nullopt);

// E, F, G, L, M, Nn and N: analytic closures when present, otherwise
// second-order finite differences (one-sided at non-periodic edges).
void fundamental_forms(ParametricPatch& patch, Exec exec = Exec::parallel);

// H, K, q, k1 >= k2 from the forms; q is clamped at 0 against roundoff.
void curvatures(ParametricPatch& patch, Exec exec = Exec::parallel);

// q < 1e-10 max(1, H^2).
inline bool numerically_umbilic(double q, double H) { return q < 1e-10 * std::max(1.0, H * H); }

struct FieldResidual {
  double sup = 0.0;
  std::size_t argmax = 0;
  std::vector<double> values;
};

// |H - f(q)| at every node.
FieldResidual weingarten_residual(const ParametricPatch& patch, const WeingartenProfile& p,
                                  Exec exec = Exec::parallel);

struct HopfField {
  std::vector<Complex> Q;
  std::vector<double> lambda;
  double identity_residual = 0.0;  // sup | |Q|/lambda - sqrt(q) |
};

HopfField hopf_differential(const ParametricPatch& patch, double conformal_tol = 1e-8);

// d_zbar Q by central differences on the interior (z = u + i v).
FieldResidual cauchy_riemann_residual(const Grid2& grid, const std::vector<Complex>& field);

// Rigid (rotation + translation) alignment of `moving` onto `fixed` with
// known correspondences.
struct RigidAlignment {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();
  double max_distance = 0.0;  // after alignment, over correspondences
  double rms = 0.0;
  std::vector<Vec3> aligned;
};

RigidAlignment align_rigid(const std::vector<Vec3>& moving, const std::vector<Vec3>& fixed);

// Symmetric Hausdorff distance between point sets (R-tree nearest queries).
double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

}  // namespace eswmt
