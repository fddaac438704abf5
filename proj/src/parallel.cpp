// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/parallel.hpp"

#include <algorithm>

namespace ecgbench::parallel {

void set_num_threads([[maybe_unused]] int n) {
#if defined(_OPENMP)
  omp_set_num_threads(std::max(1, n));
#endif
}

int max_threads() {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool in_parallel() {
#if defined(_OPENMP)
  return omp_in_parallel() != 0;
#else
  return false;
#endif
}

}  // namespace ecgbench::parallel
