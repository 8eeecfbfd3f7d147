#pragma once

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vpfp {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Sum of per-block partials accumulated in block order. The result does not
// depend on the number of threads, which keeps reductions reproducible.
template <class F>
double ordered_sum(int blocks, F&& block_sum) {
  std::vector<double> part(static_cast<size_t>(blocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int b = 0; b < blocks; ++b) part[static_cast<size_t>(b)] = block_sum(b);
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

}  // namespace vpfp
