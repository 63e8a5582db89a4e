#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace artic {

/// Kernel execution mode. Parallel paths must produce bit-identical results to
/// their serial reference; tests compare the two directly.
enum class Exec {
  serial,
  parallel,
};

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace artic
