#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include <omp.h>

namespace sparsetag {

/// Number of OpenMP threads that parallel kernels will use (OMP_NUM_THREADS).
inline int max_threads() { return omp_get_max_threads(); }

/// Runs fn(i) for i in [0, n) across OpenMP threads. Iterations must write
/// disjoint outputs. If any iteration throws, the exception from the lowest
/// index is rethrown after the loop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  bool failed = false;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : failed)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
      failed = true;
    }
  }
  if (failed) {
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
}

}  // namespace sparsetag
