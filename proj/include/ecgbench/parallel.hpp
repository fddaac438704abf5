// SPDX-License-Identifier: Apache-2.0

#pragma once

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace ecgbench::parallel {

// Thread count used by the OpenMP kernels (all of which write to pre-assigned output slots, so
// results do not depend on it).
void set_num_threads(int n);
int max_threads();
bool in_parallel();

/// Restores the previous thread count on scope exit.
class ScopedThreads {
 public:
  explicit ScopedThreads(int n) : previous_(max_threads()) { set_num_threads(n); }
  ~ScopedThreads() { set_num_threads(previous_); }
  ScopedThreads(const ScopedThreads&) = delete;
  ScopedThreads& operator=(const ScopedThreads&) = delete;

 private:
  int previous_;
};

}  // namespace ecgbench::parallel
