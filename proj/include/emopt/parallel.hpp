// OpenMP batch kernels with a serial path.
//
// threads <= 1 runs the plain serial loop (the reference implementation used
// by the equality tests and the benchmark); anything else dispatches to an
// OpenMP parallel-for. Loop bodies write only to their own index, so results
// are identical for every thread count.

#pragma once

#include <cstddef>

namespace emopt {

int hardware_threads();

// Process-wide default used when a call site passes threads = 0.
int default_threads();
void set_default_threads(int n);

namespace detail {
void omp_for(std::size_t n, void (*fn)(std::size_t, void*), void* ctx, int threads);
}

template <typename F>
void parallel_for(std::size_t n, F&& body, int threads = 0) {
  int t = threads > 0 ? threads : default_threads();
  if (t <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  auto trampoline = [](std::size_t i, void* ctx) { (*static_cast<F*>(ctx))(i); };
  detail::omp_for(n, trampoline, &body, t);
}

}  // namespace emopt
