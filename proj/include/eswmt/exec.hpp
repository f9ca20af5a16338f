#pragma once

// Execution policy for the grid kernels. Every kernel has a serial reference
// path and an OpenMP path that evaluate the same per-point function, so the
// two produce bit-identical fields. Reductions go through per-row partials
// combined in a fixed order, which keeps results independent of the thread
// count.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace eswmt {

enum class Exec { serial, parallel };

// Exceptions cannot leave an OpenMP region: the first one is kept and
// rethrown after the loop.
template <class Fn>
void for_each_index(Exec exec, std::ptrdiff_t n, Fn&& fn) {
  if (exec == Exec::parallel) {
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical(eswmt_for_each_index)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
  }
}

// Pairwise (cascade) summation; order depends only on the input length.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// Sum of fn(i) for i in [0, n) with deterministic order for either policy.
template <class Fn>
double deterministic_sum(Exec exec, std::ptrdiff_t n, Fn&& fn) {
  std::vector<double> terms(static_cast<std::size_t>(n));
  for_each_index(exec, n, [&](std::ptrdiff_t i) { terms[static_cast<std::size_t>(i)] = fn(i); });
  return pairwise_sum(terms);
}

// Sets the OpenMP team size; 0 leaves the runtime default.
void set_thread_count(int threads);
int thread_count();

}  // namespace eswmt
