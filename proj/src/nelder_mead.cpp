#include "emopt/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emopt {

namespace {

void clamp_reflect(std::vector<double>& p, const BoundsSpec* b) {
  if (!b) return;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = b->lower[i], hi = b->upper[i];
    if (p[i] < lo) p[i] = lo + (lo - p[i]);
    else if (p[i] > hi) p[i] = hi - (p[i] - hi);
    if (p[i] < lo) p[i] = lo;
    else if (p[i] > hi) p[i] = hi;
  }
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& start,
                          const std::vector<double>& steps,
                          const SimplexOptions& options) {
  const std::size_t n = start.size();
  SimplexResult result;

  auto eval = [&](const std::vector<double>& p) {
    ++result.evals;
    return objective(p);
  };

  std::vector<std::vector<double>> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(start);
  for (std::size_t i = 0; i < n; ++i) {
    auto p = start;
    p[i] += steps[i];
    clamp_reflect(p, options.bounds);
    simplex.push_back(std::move(p));
  }
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);

  for (long iter = 0; iter < options.max_iters; ++iter) {
    if (options.stop && *options.stop) break;
    result.iters = iter + 1;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const std::size_t best = order[0], second_worst = order[n - 1], worst = order[n];

    double size = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t d = 0; d < n; ++d)
        size = std::max(size, std::abs(simplex[i][d] - simplex[best][d]));
    if (size < options.size_tol) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto make_point = [&](double coeff) {
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d)
        p[d] = centroid[d] + coeff * (centroid[d] - simplex[worst][d]);
      clamp_reflect(p, options.bounds);
      return p;
    };

    auto reflected = make_point(1.0);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      auto expanded = make_point(2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = std::move(expanded);
        values[worst] = f_expanded;
      } else {
        simplex[worst] = std::move(reflected);
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      simplex[worst] = std::move(reflected);
      values[worst] = f_reflected;
    } else {
      auto contracted = make_point(-0.5);
      const double f_contracted = eval(contracted);
      if (f_contracted < values[worst]) {
        simplex[worst] = std::move(contracted);
        values[worst] = f_contracted;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (values[i] < values[best]) best = i;
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace emopt
