#pragma once

// Adapted Codazzi pair of a Weingarten surface H = f(q):
//   I_f  = (cosh P - H sinh P / sqrt q) I + (sinh P / sqrt q) II
//   II_f = (-H cosh P + sqrt q sinh P) I + cosh P II,        P = phi(sqrt q).
// Relative to I the form I_f has eigenvalues e^{+-P} and II_f has I_f-relative
// eigenvalues +-sqrt q, so H_f = 0 and det II_f / det I_f = -q.

#include <cstdint>
#include <vector>

#include "eswmt/profile.hpp"
#include "eswmt/rotational.hpp"
#include "eswmt/surface.hpp"

namespace eswmt {

struct AdaptedPair {
  Grid2 grid;
  std::vector<double> phi;                // P = phi(sqrt q)
  std::vector<double> E, F, G;            // I_f
  std::vector<double> L, M, N;            // II_f
  std::vector<double> q;                  // of the base patch
  std::vector<std::uint8_t> umbilic;      // numerically umbilic base nodes
};

// sinh(P) / r with a four-term series for r < 1e-6, where P = phi(r).
double sinh_phi_over_r(const WeingartenProfile& p, double r);

AdaptedPair adapted_pair(const ParametricPatch& patch, const WeingartenProfile& p, Exec exec = Exec::parallel);

struct PairInvariants {
  std::vector<double> H_f, K_f, q_f;
  double sup_mean = 0.0;       // sup |H_f|
  double sup_gauss = 0.0;      // sup |K_f + q|
  double sup_skew = 0.0;       // sup |q_f - q|
  std::size_t mask_mismatch = 0;  // nodes umbilic for exactly one of the pairs
};

PairInvariants pair_invariants(const AdaptedPair& pair, Exec exec = Exec::parallel);

// Gaussian curvature of E du^2 + 2F du dv + G dv^2 (Brioschi formula,
// second-order differences). Throws "degenerate metric" when EG - F^2 <= 0.
std::vector<double> intrinsic_curvature(const Grid2& grid, const std::vector<double>& E, const std::vector<double>& F,
                                        const std::vector<double>& G, Exec exec = Exec::parallel);

// Largest eigenvalue ratio of I_f against I over the patch, e^{2 max |P|}.
double comparability_constant(const AdaptedPair& pair);

struct SimonsResidual {
  std::vector<double> values;        // Laplacian(ln|II_f|) - 2 K_f(intrinsic), NaN where excluded
  double sup = 0.0;
  double l2 = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
  double intrinsic_vs_extrinsic = 0.0;  // sup |K_f(intrinsic) + q| over used nodes
};

// Divergence-form Laplace-Beltrami in the metric I_f. Nodes within
// `mask_radius` of an umbilic node or of a non-periodic edge are excluded.
// Throws "Simons test inapplicable" when the umbilic mask covers > 50%.
SimonsResidual simons_residual(const AdaptedPair& pair, std::size_t mask_radius = 2, Exec exec = Exec::parallel);

// Same test for a rotational surface, reduced to the generatrix parameter s:
// for A ds^2 + B dphi^2 (a = sqrt A, b = sqrt B)
//   Laplacian u = (1 / ab) (b u' / a)',   K = -(1 / ab) (b' / a)'.
// Also returns the I_f-conformal Hopf coefficient, which must be constant.
struct RotationalSimons {
  SimonsResidual simons;
  std::vector<double> hopf_f;         // (L_f b^2 / a^2 - N_f) / 4 at each sample
  double hopf_f_variation = 0.0;      // sup |hopf_f - hopf_f[mid]| / |hopf_f[mid]|
};

RotationalSimons rotational_simons(const Generatrix& g, const WeingartenProfile& p, std::size_t edge_skip = 2);

struct SimonsRefinement {
  std::vector<double> sup;     // per level, measured at the coarse nodes
  std::vector<double> ratios;  // sup[k] / sup[k + 1]
  double min_ratio() const;
};

// Band [l1, l2] in arc length with n0, 2 n0, 4 n0, ... intervals.
SimonsRefinement simons_refinement(const WeingartenProfile& p, double tau, double l1, double l2, std::size_t n0,
                                   std::size_t levels = 3);

}  // namespace eswmt
