#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nlreg {

// Execution mode for the data-parallel sweeps (stencil rows, sample sweeps,
// pair scans). Exec::serial is the reference path the tests compare against;
// both paths write results by index, so they agree bitwise.
enum class Exec { serial, parallel };

template <class F>
void for_each_index(std::size_t n, F&& body, Exec mode = Exec::parallel) {
#ifdef _OPENMP
  if (mode == Exec::parallel) {
    // exceptions must not unwind through the parallel region: keep the first
    // one and rethrow afterwards
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < nn; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace nlreg
