#pragma once

#include <cstddef>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace andrews::parallel {

// Work is partitioned across independent items (modes, grid sizes, test
// batches); each item is computed single-threaded and written to its own
// slot, so results are identical to the serial reference for any thread
// count.

bool enabled();
void set_enabled(bool on);
int thread_count();

/// Serial reference loop, kept as the baseline the parallel kernel is
/// checked and benchmarked against.
template <class Body>
void serial_for(std::size_t n, Body&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

/// OpenMP loop over independent items; falls back to the serial reference
/// when OpenMP is unavailable or disabled at runtime.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef _OPENMP
  if (enabled() && n > 1) {
    const long long ln = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < ln; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  serial_for(n, body);
}

inline bool& enabled_flag() {
  static bool flag = true;
  return flag;
}

inline bool enabled() { return enabled_flag(); }
inline void set_enabled(bool on) { enabled_flag() = on; }

inline int thread_count() {
#ifdef _OPENMP
  if (!enabled()) return 1;
  int threads = 1;
#pragma omp parallel
  {
#pragma omp single
    threads = omp_get_num_threads();
  }
  return threads;
#else
  return 1;
#endif
}

}  // namespace andrews::parallel
