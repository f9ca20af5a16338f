#pragma once

// Classical RK4 with step-doubling error control for small fixed-size
// systems. Fixed-step mode is kept for convergence studies.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace eswmt {

template <std::size_t N>
using OdeState = std::array<double, N>;

struct StepControl {
  double initial_step = 1e-3;
  double tolerance = 1e-12;  // per-step error, mixed absolute/relative
  double min_step = 1e-13;
  double max_step = 0.5;
  double fixed_step = 0.0;   // > 0 selects fixed-step RK4 without error control
  std::size_t max_steps = 20'000'000;
};

template <std::size_t N, class Rhs>
OdeState<N> rk4_step(const Rhs& rhs, double s, const OdeState<N>& y, double h) {
  OdeState<N> k1 = rhs(s, y);
  OdeState<N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  OdeState<N> k2 = rhs(s + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  OdeState<N> k3 = rhs(s + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  OdeState<N> k4 = rhs(s + h, tmp);
  OdeState<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

struct DoublingResult {
  bool accepted = false;
  double next_step = 0.0;
};

// One attempted step of size h. On acceptance y holds the locally
// extrapolated (fifth-order) value.
template <std::size_t N, class Rhs>
DoublingResult rk4_doubling_step(const Rhs& rhs, double s, OdeState<N>& y, double h, double tol) {
  const OdeState<N> big = rk4_step<N>(rhs, s, y, h);
  const OdeState<N> half = rk4_step<N>(rhs, s, y, 0.5 * h);
  const OdeState<N> two = rk4_step<N>(rhs, s + 0.5 * h, half, 0.5 * h);
  double err = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double e = std::abs(two[i] - big[i]) / 15.0;
    err = std::max(err, e / (1.0 + std::abs(two[i])));
  }
  DoublingResult r;
  const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
  r.next_step = h * factor;
  if (err <= tol) {
    r.accepted = true;
    for (std::size_t i = 0; i < N; ++i) y[i] = two[i] + (two[i] - big[i]) / 15.0;
  }
  return r;
}

}  // namespace eswmt
