#include "emopt/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>

namespace emopt {

namespace {
std::atomic<int> g_default_threads{0};  // 0 = auto (all hardware threads)
}

int hardware_threads() { return std::max(1, omp_get_max_threads()); }

int default_threads() {
  int t = g_default_threads.load();
  return t > 0 ? t : hardware_threads();
}

void set_default_threads(int n) { g_default_threads.store(n); }

namespace detail {

void omp_for(std::size_t n, void (*fn)(std::size_t, void*), void* ctx, int threads) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    fn(static_cast<std::size_t>(i), ctx);
  }
}

}  // namespace detail

}  // namespace emopt
