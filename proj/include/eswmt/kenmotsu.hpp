#pragma once

// Gauss map, Beltrami coefficient and the Kenmotsu representation.
//
// On a conformal chart z = u + i v with normal N = X_u x X_v / |.|, the
// north-pole stereographic Gauss map G = (N1 + i N2) / (1 - N3) satisfies
//   d_z X = -(1 / H) conj(G_zbar) xi(G),
//   xi(G) = (1 - G^2, i (1 + G^2), 2 G) / (1 + |G|^2)^2,
// and X = 2 Re int d_z X dz recovers the immersion up to translation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eswmt/profile.hpp"
#include "eswmt/rotational.hpp"
#include "eswmt/surface.hpp"

namespace eswmt {

// North: G = (N1 + i N2) / (1 - N3).
// South: 1 / G = (N1 - i N2) / (1 + N3), orientation-preserving with the
// same Beltrami coefficient as the north chart.
enum class ProjectionPole { north, south };

struct KenmotsuField {
  Grid2 grid;  // conformal chart, z = u + i v
  std::vector<Complex> G;
  std::vector<double> H;
  ProjectionPole pole = ProjectionPole::north;
};

Complex stereographic(const Vec3& n, ProjectionPole pole = ProjectionPole::north);
Vec3 inverse_stereographic(Complex g, ProjectionPole pole = ProjectionPole::north);

// Throws "switch projection pole" when a normal sits at the projection pole.
std::vector<Complex> gauss_map_stereo(const ParametricPatch& patch, ProjectionPole pole = ProjectionPole::north);

// Gauss map and mean curvature of a conformal patch with forms and curvatures.
KenmotsuField kenmotsu_field(const ParametricPatch& patch, ProjectionPole pole = ProjectionPole::north);

// Band of a rotational surface in its conformal chart (sigma, phi), with
// G and H taken from the sampled turning angle. phi covers [phi0, phi1]
// with nphi nodes, or the full circle when `periodic`.
KenmotsuField rotational_kenmotsu_field(const Generatrix& conformal, std::size_t nphi, bool periodic = true,
                                        double phi0 = 0.0, double phi1 = 1.0);

struct BeltramiField {
  std::vector<Complex> mu;
  std::vector<std::uint8_t> masked;  // 1 where G_z is below tolerance
  std::size_t masked_count = 0;
  double sup = 0.0;                  // over unmasked nodes
};

// mu = G_zbar / G_z by fourth-order central differences. Throws
// "degenerate Gauss map chart" when more than 10% of the grid is masked.
BeltramiField beltrami_mu(const KenmotsuField& field, double rel_tol = 1e-8, Exec exec = Exec::parallel);

// sup | |mu| - f(q)/sqrt(q) | over unmasked nodes; mu = 0 is expected at
// numerically umbilic nodes.
double mu_identity_residual(const BeltramiField& mu, const ParametricPatch& patch, const WeingartenProfile& p);

// H lambda / Q from the Hopf differential (conformal patch), and its sup
// distance from the Gauss-map coefficient at common unmasked nodes.
struct HopfBeltrami {
  std::vector<Complex> mu;
  std::vector<std::uint8_t> masked;
  double discrepancy = 0.0;
  double modulus_discrepancy = 0.0;
};

HopfBeltrami hopf_beltrami(const ParametricPatch& patch, const BeltramiField& from_gauss_map);

// (1 + |mu|) / (1 - |mu|); throws "not quasiconformal" when |mu| >= 1.
double dilatation(double mu_sup);
double dilatation(const BeltramiField& mu);

// Map of the closed unit disk with g(0) = 0, sampled at scattered points.
struct DiskSamples {
  std::vector<Complex> w;
  std::vector<Complex> g;
  double mu_sup = 0.0;  // of g on the disk
};

struct MoriReport {
  double gamma = 1.0;
  double worst_ratio = 0.0;  // max |g(z) - g(w)| / (16 |z - w|^{1/Gamma})
  std::size_t pairs = 0;
  std::size_t violations = 0;
};

// Deterministic pseudo-random pairs (fixed seed).
MoriReport mori_bound_check(const DiskSamples& disk, std::size_t pairs = 20000, std::uint64_t seed = 12345);

DiskSamples conformal_disk_samples(std::size_t n_r = 32, std::size_t n_phi = 64);
// g(w) = (w + k conj(w)) / (1 + k): constant Beltrami coefficient k.
DiskSamples affine_disk_samples(double k, std::size_t n_r = 32, std::size_t n_phi = 64);
// The upper end of a rotational surface beyond sigma0, in the disk coordinate
// w = exp(-(sigma - sigma0) - i phi) with g = 1/G (south chart).
DiskSamples rotational_end_disk(const Generatrix& conformal, double sigma0, std::size_t nphi = 64);

struct IntegrabilityResidual {
  std::vector<Complex> values;  // H (G_zzbar - 2 conj(G) G_z G_zbar / (1 + |G|^2)) - H_z G_zbar
  double sup = 0.0;             // interior nodes
  double l2 = 0.0;              // root mean square over interior nodes
};

IntegrabilityResidual integrability_residual(const KenmotsuField& field, Exec exec = Exec::parallel);

// Throws "mean curvature vanishes: Kenmotsu recovery undefined" when |H| is
// numerically zero anywhere. The node (0, 0) is placed at `basepoint`.
ParametricPatch recover_immersion(const KenmotsuField& field, const Vec3& basepoint = Vec3::Zero(),
                                  Exec exec = Exec::parallel);

struct RoundTrip {
  double hausdorff = 0.0;
  double max_alignment_error = 0.0;
  double integrability_sup = 0.0;
  double mu_sup = 0.0;
  double dilatation = 1.0;
  double mu_identity = 0.0;        // sup | |mu| - f(q)/sqrt(q) |
  double hopf_discrepancy = 0.0;   // sup |G_zbar/G_z - H lambda/Q|
  std::size_t nodes = 0;
};

// Rotational band in arc length [l1, l2] resampled conformally, extracted to
// (G, H), recovered and rigidly aligned onto the original samples.
RoundTrip kenmotsu_roundtrip(const WeingartenProfile& p, double tau, double l1, double l2, std::size_t n_sigma,
                             std::size_t n_phi, Exec exec = Exec::parallel);

}  // namespace eswmt
