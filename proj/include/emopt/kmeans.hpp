// Seeded deterministic k-means (k-means++ initialization, Lloyd iterations).

#pragma once

#include <vector>

#include "emopt/rng.hpp"

namespace emopt {

struct KmeansResult {
  std::vector<int> assignment;                // cluster id per point
  std::vector<std::vector<double>> centers;

  int iters = 0;
};

KmeansResult kmeans(const std::vector<std::vector<double>>& points, int k, Rng& rng,
                    int max_iters = 100);

}  // namespace emopt
