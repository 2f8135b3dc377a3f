// Execution policy for the batch kernels. Every parallel kernel in the
// library has a serial twin that the tests compare against; Exec picks which
// one runs. With GALEDIM_OPENMP off (or no OpenMP toolchain) Exec::parallel
// silently degrades to the serial path.

#pragma once

#include <cstddef>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace galedim {

enum class Exec { serial, parallel };

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Runs body(i) for i in [0, n). GMP/MPFR values are heap-backed, so bodies
// must only touch per-iteration state; reductions go through parallel_map
// style per-thread accumulators in the callers.
template <typename Body>
void parallel_for(Exec exec, std::size_t n, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
    std::int64_t sn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < sn; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace galedim
