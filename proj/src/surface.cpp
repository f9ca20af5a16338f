#include "eswmt/surface.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <omp.h>

#include "eswmt/error.hpp"

namespace eswmt {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

namespace {

double uniform_step(const std::vector<double>& x, const char* axis) {
  if (x.size() < 2) fail_config(std::string("grid axis ") + axis + " needs at least two nodes");
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * std::abs(h)) {
      fail_config(std::string("finite differences need a uniform grid along ") + axis);
    }
  }
  return h;
}

// First and second derivative along one axis of a field laid out on the
// grid; second order everywhere.
template <class T>
struct AxisStencil {
  std::size_t n;
  std::size_t stride;
  double h;
  bool periodic;

  template <class Get>
  T first(Get&& at, std::size_t i) const {
    if (periodic) return (at((i + 1) % n) - at((i + n - 1) % n)) / (2.0 * h);
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
  }
  template <class Get>
  T second(Get&& at, std::size_t i) const {
    if (periodic) return (at((i + 1) % n) - 2.0 * at(i) + at((i + n - 1) % n)) / (h * h);
    if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
    if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h);
    return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
  }
};

struct Degeneracy {
  std::atomic<bool> hit{false};
  std::size_t index = 0;
  void record(std::size_t idx) {
    bool expected = false;
    if (hit.compare_exchange_strong(expected, true)) index = idx;
  }
};

}  // namespace

double Grid2::du() const { return uniform_step(u, "u"); }

double Grid2::dv() const {
  if (periodic_v) return 2.0 * std::numbers::pi / static_cast<double>(v.size());
  return uniform_step(v, "v");
}

Grid2 Grid2::uniform(double u0, double u1, std::size_t nu, double v0, double v1, std::size_t nv) {
  if (nu < 2 || nv < 2) fail_config("grid needs at least 2 x 2 nodes");
  Grid2 g;
  g.u.resize(nu);
  g.v.resize(nv);
  for (std::size_t i = 0; i < nu; ++i) g.u[i] = u0 + (u1 - u0) * static_cast<double>(i) / static_cast<double>(nu - 1);
  for (std::size_t j = 0; j < nv; ++j) g.v[j] = v0 + (v1 - v0) * static_cast<double>(j) / static_cast<double>(nv - 1);
  return g;
}

Grid2 Grid2::periodic(double u0, double u1, std::size_t nu, std::size_t nv) {
  Grid2 g = uniform(u0, u1, nu, 0.0, 1.0, 2);
  return periodic(std::move(g.u), nv);
}

Grid2 Grid2::periodic(std::vector<double> u, std::size_t nv) {
  if (nv < 3) fail_config("periodic grid needs at least 3 angular nodes");
  Grid2 g;
  g.u = std::move(u);
  g.v.resize(nv);
  for (std::size_t j = 0; j < nv; ++j) g.v[j] = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nv);
  g.periodic_v = true;
  return g;
}

bool ParametricPatch::is_conformal(double tol) const {
  if (!has_forms()) return false;
  for (std::size_t k = 0; k < E.size(); ++k) {
    const double s = std::max(E[k], G[k]);
    if (std::abs(E[k] - G[k]) > tol * s || std::abs(F[k]) > tol * s) return false;
  }
  return true;
}

ParametricPatch sample_patch(Grid2 grid, const std::function<Vec3(double, double)>& x,
                             std::optional<PatchDerivatives> analytic) {
  ParametricPatch p;
  p.grid = std::move(grid);
  p.X.resize(p.grid.size());
  for (std::size_t i = 0; i < p.grid.nu(); ++i)
    for (std::size_t j = 0; j < p.grid.nv(); ++j) p.X[p.grid.index(i, j)] = x(p.grid.u[i], p.grid.v[j]);
  p.analytic = std::move(analytic);
  return p;
}

void fundamental_forms(ParametricPatch& patch, Exec exec) {
  const Grid2& g = patch.grid;
  const std::size_t nu = g.nu(), nv = g.nv(), n = g.size();
  if (patch.X.size() != n) fail_config("patch samples do not match the grid");

  std::vector<Vec3> xu(n), xv(n), xuu(n), xuv(n), xvv(n);
  if (patch.analytic) {
    const auto& a = *patch.analytic;
    for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
      const auto k = static_cast<std::size_t>(idx);
      const double u = g.u[k / nv], v = g.v[k % nv];
      xu[k] = a.xu(u, v);
      xv[k] = a.xv(u, v);
      xuu[k] = a.xuu(u, v);
      xuv[k] = a.xuv(u, v);
      xvv[k] = a.xvv(u, v);
    });
  } else {
    if (nu < 4 || nv < 4) fail_config("finite differences need at least 4 x 4 nodes");
    const AxisStencil<Vec3> su{nu, nv, g.du(), false};
    const AxisStencil<Vec3> sv{nv, 1, g.dv(), g.periodic_v};
    const auto& X = patch.X;
    for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
      const auto k = static_cast<std::size_t>(idx);
      const std::size_t i = k / nv, j = k % nv;
      auto along_u = [&](std::size_t ii) -> Vec3 { return X[ii * nv + j]; };
      auto along_v = [&](std::size_t jj) -> Vec3 { return X[i * nv + jj]; };
      xu[k] = su.first(along_u, i);
      xuu[k] = su.second(along_u, i);
      xv[k] = sv.first(along_v, j);
      xvv[k] = sv.second(along_v, j);
    });
    // Mixed derivative: v-derivative of X_u.
    for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
      const auto k = static_cast<std::size_t>(idx);
      const std::size_t i = k / nv, j = k % nv;
      auto along_v = [&](std::size_t jj) -> Vec3 { return xu[i * nv + jj]; };
      xuv[k] = sv.first(along_v, j);
    });
  }

  patch.E.assign(n, 0.0); patch.F.assign(n, 0.0); patch.G.assign(n, 0.0);
  patch.L.assign(n, 0.0); patch.M.assign(n, 0.0); patch.Nn.assign(n, 0.0);
  patch.normal.assign(n, Vec3::Zero());
  Degeneracy bad;
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
    const auto k = static_cast<std::size_t>(idx);
    const double E = xu[k].dot(xu[k]);
    const double F = xu[k].dot(xv[k]);
    const double G = xv[k].dot(xv[k]);
    const Vec3 c = xu[k].cross(xv[k]);
    const double area = c.norm();
    if (!(E * G - F * F > 0.0) || !(area > 0.0)) {
      bad.record(k);
      return;
    }
    const Vec3 N = c / area;
    patch.E[k] = E;
    patch.F[k] = F;
    patch.G[k] = G;
    patch.normal[k] = N;
    patch.L[k] = xuu[k].dot(N);
    patch.M[k] = xuv[k].dot(N);
    patch.Nn[k] = xvv[k].dot(N);
  });
  if (bad.hit) {
    std::ostringstream os;
    os << "immersion degeneracy at (u, v) = (" << g.u[bad.index / nv] << ", " << g.v[bad.index % nv] << ")";
    patch.E.clear();
    fail_numeric(os.str());
  }
}

void curvatures(ParametricPatch& patch, Exec exec) {
  if (!patch.has_forms()) fail_config("curvatures: fundamental forms missing");
  const std::size_t n = patch.E.size();
  patch.H.assign(n, 0.0); patch.K.assign(n, 0.0); patch.q.assign(n, 0.0);
  patch.k1.assign(n, 0.0); patch.k2.assign(n, 0.0);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
    const auto k = static_cast<std::size_t>(idx);
    const double E = patch.E[k], F = patch.F[k], G = patch.G[k];
    const double L = patch.L[k], M = patch.M[k], N = patch.Nn[k];
    const double det = E * G - F * F;
    const double H = (E * N - 2.0 * F * M + G * L) / (2.0 * det);
    const double K = (L * N - M * M) / det;
    const double q = std::max(H * H - K, 0.0);
    const double t = std::sqrt(q);
    patch.H[k] = H;
    patch.K[k] = K;
    patch.q[k] = q;
    patch.k1[k] = H + t;
    patch.k2[k] = H - t;
  });
}

FieldResidual weingarten_residual(const ParametricPatch& patch, const WeingartenProfile& p, Exec exec) {
  if (!patch.has_curvatures()) fail_config("weingarten_residual: curvature fields missing");
  FieldResidual r;
  const std::size_t n = patch.H.size();
  r.values.resize(n);
  for_each_index(exec, static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t idx) {
    const auto k = static_cast<std::size_t>(idx);
    r.values[k] = std::abs(patch.H[k] - p.eval(patch.q[k]));
  });
  for (std::size_t k = 0; k < n; ++k) {
    if (r.values[k] > r.sup) {
      r.sup = r.values[k];
      r.argmax = k;
    }
  }
  return r;
}

HopfField hopf_differential(const ParametricPatch& patch, double conformal_tol) {
  if (!patch.has_curvatures()) fail_config("hopf_differential: curvature fields missing");
  if (!patch.is_conformal(conformal_tol)) fail_config("conformal chart required");
  HopfField h;
  const std::size_t n = patch.E.size();
  h.Q.resize(n);
  h.lambda.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    h.Q[k] = Complex(patch.L[k] - patch.Nn[k], -2.0 * patch.M[k]) / 4.0;
    h.lambda[k] = patch.lambda(k);
    h.identity_residual = std::max(h.identity_residual, std::abs(std::abs(h.Q[k]) / h.lambda[k] - std::sqrt(patch.q[k])));
  }
  return h;
}

FieldResidual cauchy_riemann_residual(const Grid2& grid, const std::vector<Complex>& field) {
  const std::size_t nu = grid.nu(), nv = grid.nv();
  const double hu = grid.du(), hv = grid.dv();
  FieldResidual r;
  r.values.assign(field.size(), 0.0);
  for (std::size_t i = 1; i + 1 < nu; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      if (!grid.periodic_v && (j == 0 || j + 1 == nv)) continue;
      const std::size_t jp = (j + 1) % nv, jm = (j + nv - 1) % nv;
      const Complex fu = (field[grid.index(i + 1, j)] - field[grid.index(i - 1, j)]) / (2.0 * hu);
      const Complex fv = (field[grid.index(i, jp)] - field[grid.index(i, jm)]) / (2.0 * hv);
      const double v = std::abs(0.5 * (fu + Complex(0, 1) * fv));
      const std::size_t k = grid.index(i, j);
      r.values[k] = v;
      if (v > r.sup) {
        r.sup = v;
        r.argmax = k;
      }
    }
  }
  return r;
}

RigidAlignment align_rigid(const std::vector<Vec3>& moving, const std::vector<Vec3>& fixed) {
  if (moving.size() != fixed.size() || moving.empty()) fail_config("align_rigid: point sets must match in size");
  const double n = static_cast<double>(moving.size());
  Vec3 cm = Vec3::Zero(), cf = Vec3::Zero();
  for (std::size_t k = 0; k < moving.size(); ++k) {
    cm += moving[k];
    cf += fixed[k];
  }
  cm /= n;
  cf /= n;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t k = 0; k < moving.size(); ++k) cov += (moving[k] - cm) * (fixed[k] - cf).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) D(2, 2) = -1.0;
  RigidAlignment a;
  a.rotation = svd.matrixV() * D * svd.matrixU().transpose();
  a.translation = cf - a.rotation * cm;
  a.aligned.resize(moving.size());
  double ss = 0.0;
  for (std::size_t k = 0; k < moving.size(); ++k) {
    a.aligned[k] = a.rotation * moving[k] + a.translation;
    const double d = (a.aligned[k] - fixed[k]).norm();
    a.max_distance = std::max(a.max_distance, d);
    ss += d * d;
  }
  a.rms = std::sqrt(ss / n);
  return a;
}

double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) fail_config("hausdorff_distance: empty point set");
  namespace bg = boost::geometry;
  using Point = bg::model::point<double, 3, bg::cs::cartesian>;
  auto directed = [](const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    std::vector<Point> pts;
    pts.reserve(to.size());
    for (const Vec3& y : to) pts.emplace_back(y.x(), y.y(), y.z());
    const bg::index::rtree<Point, bg::index::rstar<16>> tree(pts.begin(), pts.end());
    std::vector<double> best(from.size());
    for_each_index(Exec::parallel, static_cast<std::ptrdiff_t>(from.size()), [&](std::ptrdiff_t i) {
      const Vec3& x = from[static_cast<std::size_t>(i)];
      const Point q(x.x(), x.y(), x.z());
      Point hit;
      tree.query(bg::index::nearest(q, 1), &hit);
      best[static_cast<std::size_t>(i)] = bg::distance(q, hit);
    });
    return *std::max_element(best.begin(), best.end());
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace eswmt
