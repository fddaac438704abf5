// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace ecgbench::fft {
namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    std::vector<Complex> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(out.data()), sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(std::pair{n, sign}, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<Complex> execute(std::span<const Complex> x, int sign) {
  std::vector<Complex> in(x.begin(), x.end());
  std::vector<Complex> out(x.size());
  if (x.empty()) return out;
  fftw_plan plan = cache().get(static_cast<int>(x.size()), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> x) { return execute(x, FFTW_FORWARD); }

std::vector<Complex> forward(std::span<const double> x) {
  std::vector<Complex> c(x.begin(), x.end());
  return execute(c, FFTW_FORWARD);
}

std::vector<Complex> inverse(std::span<const Complex> x) { return execute(x, FFTW_BACKWARD); }

}  // namespace ecgbench::fft
