#pragma once

// Finite-difference partial derivatives of gridded fields (real or complex).
// Second- or fourth-order accurate everywhere: centred in the interior,
// one-sided at non-periodic edges, wrapped along periodic v.

#include <cstddef>
#include <vector>

#include "eswmt/error.hpp"
#include "eswmt/exec.hpp"
#include "eswmt/surface.hpp"

namespace eswmt {

enum class Axis { u, v };

namespace detail {

template <class T, class Get>
T first_derivative(Get&& at, std::size_t i, std::size_t n, double h, bool periodic, int order) {
  auto w = [&](std::ptrdiff_t k) { return at(static_cast<std::size_t>((static_cast<std::ptrdiff_t>(n) + k) % static_cast<std::ptrdiff_t>(n))); };
  const auto ii = static_cast<std::ptrdiff_t>(i);
  if (order == 2) {
    if (periodic) return (w(ii + 1) - w(ii - 1)) / (2.0 * h);
    if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
    if (i == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
    return (at(i + 1) - at(i - 1)) / (2.0 * h);
  }
  if (periodic || (i >= 2 && i + 2 < n))
    return (-w(ii + 2) + 8.0 * w(ii + 1) - 8.0 * w(ii - 1) + w(ii - 2)) / (12.0 * h);
  if (i == 0) return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
  if (i == 1) return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
  if (i == n - 2)
    return (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) / (12.0 * h);
  return (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) + 3.0 * at(n - 5)) / (12.0 * h);
}

template <class T, class Get>
T second_derivative(Get&& at, std::size_t i, std::size_t n, double h, bool periodic) {
  if (periodic) return (at((i + 1) % n) - 2.0 * at(i) + at((i + n - 1) % n)) / (h * h);
  if (i == 0) return (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h);
  if (i == n - 1) return (2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h);
  return (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
}

}  // namespace detail

// order: 2 or 4.
template <class T>
std::vector<T> partial(const Grid2& g, const std::vector<T>& f, Axis axis, int order = 2, Exec exec = Exec::parallel) {
  const std::size_t nu = g.nu(), nv = g.nv();
  const std::size_t need = order == 4 ? 5 : 3;
  if ((axis == Axis::u && nu < need) || (axis == Axis::v && !g.periodic_v && nv < need))
    fail_config("grid too small for the finite-difference stencil");
  const double h = axis == Axis::u ? g.du() : g.dv();
  std::vector<T> out(f.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(g.size()), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const std::size_t i = k / nv, j = k % nv;
    if (axis == Axis::u)
      out[k] = detail::first_derivative<T>([&](std::size_t a) { return f[g.index(a, j)]; }, i, nu, h, false, order);
    else
      out[k] = detail::first_derivative<T>([&](std::size_t b) { return f[g.index(i, b)]; }, j, nv, h, g.periodic_v,
                                           order);
  });
  return out;
}

// Second-order accurate pure second derivative.
template <class T>
std::vector<T> partial2(const Grid2& g, const std::vector<T>& f, Axis axis, Exec exec = Exec::parallel) {
  const std::size_t nu = g.nu(), nv = g.nv();
  if ((axis == Axis::u && nu < 4) || (axis == Axis::v && !g.periodic_v && nv < 4))
    fail_config("grid too small for the finite-difference stencil");
  const double h = axis == Axis::u ? g.du() : g.dv();
  std::vector<T> out(f.size());
  for_each_index(exec, static_cast<std::ptrdiff_t>(g.size()), [&](std::ptrdiff_t kk) {
    const auto k = static_cast<std::size_t>(kk);
    const std::size_t i = k / nv, j = k % nv;
    if (axis == Axis::u)
      out[k] = detail::second_derivative<T>([&](std::size_t a) { return f[g.index(a, j)]; }, i, nu, h, false);
    else
      out[k] = detail::second_derivative<T>([&](std::size_t b) { return f[g.index(i, b)]; }, j, nv, h, g.periodic_v);
  });
  return out;
}

}  // namespace eswmt
