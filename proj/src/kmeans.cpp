#include "emopt/kmeans.hpp"

#include <limits>
#include <stdexcept>

namespace emopt {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

}  // namespace

namespace {

KmeansResult kmeans_once(const std::vector<std::vector<double>>& points, int k, Rng& rng,
                         int max_iters) {
  const int n = static_cast<int>(points.size());

  KmeansResult result;
  result.centers.reserve(k);

  // k-means++ seeding
  result.centers.push_back(points[rng.uniform_int(static_cast<std::uint64_t>(n))]);
  std::vector<double> d2(n);
  while (static_cast<int>(result.centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : result.centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    int chosen = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      chosen = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    result.centers.push_back(points[chosen]);
  }

  result.assignment.assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    result.iters = iter + 1;
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points[i], result.centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points[i], result.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.assignment[i] != best) {
        result.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    for (int c = 0; c < k; ++c) {
      std::vector<double> mean(points[0].size(), 0.0);
      int count = 0;
      for (int i = 0; i < n; ++i) {
        if (result.assignment[i] != c) continue;
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += points[i][j];
        ++count;
      }
      if (count > 0) {
        for (double& v : mean) v /= count;
        result.centers[c] = std::move(mean);
      }
      // empty clusters keep their center
    }
  }
  return result;
}

double wcss(const std::vector<std::vector<double>>& points, const KmeansResult& r) {
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    total += sq_dist(points[i], r.centers[static_cast<std::size_t>(r.assignment[i])]);
  return total;
}

}  // namespace

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, Rng& rng,
                    int max_iters) {
  const int n = static_cast<int>(points.size());
  if (n == 0 || k < 1) throw std::invalid_argument("kmeans: need points and k >= 1");
  if (k > n) k = n;

  // several seeded restarts, keep the tightest clustering
  constexpr int kRestarts = 5;
  KmeansResult best;
  double best_wcss = 0.0;
  for (int r = 0; r < kRestarts; ++r) {
    KmeansResult candidate = kmeans_once(points, k, rng, max_iters);
    const double w = wcss(points, candidate);
    if (r == 0 || w < best_wcss) {
      best_wcss = w;
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace emopt
