#include "emopt/sampling.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "emopt/parallel.hpp"

namespace emopt {

std::vector<DecisionVector> lhs(int n, const BoundsSpec& bounds, std::uint64_t seed,
                                LhsSnap snap) {
  if (n < 1) throw std::invalid_argument("lhs: n must be >= 1");
  bounds.validate();
  const int dim = bounds.dimension();

  if (snap == LhsSnap::Grid) {
    for (int j = 0; j < dim; ++j) {
      if (bounds.range(j) / n < grid::kStep) {
        throw PrecisionConflict("lhs: bin width below 0.01 for variable " + std::to_string(j + 1) +
                                "; stratification cannot survive grid rounding");
      }
    }
  }

  Rng rng(mix({seed, streams::kLhs}));
  std::vector<DecisionVector> samples(n, DecisionVector(dim));

  for (int j = 0; j < dim; ++j) {
    const double width = bounds.range(j) / n;
    std::vector<int> bin = rng.permutation(n);
    for (int i = 0; i < n; ++i) {
      const double lo = bounds.lower[j] + bin[i] * width;
      double v = lo + rng.uniform() * width;
      if (snap == LhsSnap::Grid) {
        double s = grid::snap(v);
        // keep the grid point inside this sample's bin
        if (s < lo) s += grid::kStep;
        if (bin[i] + 1 < n && s >= lo + width) s -= grid::kStep;
        v = s;
      }
      samples[i][j] = v;
    }
  }
  return samples;
}

std::vector<DecisionVector> constrained_sampling(int n_doe, const Problem& problem,
                                                 std::uint64_t seed,
                                                 const RepairConfig& repair_cfg, int max_rounds,
                                                 int threads) {
  if (n_doe < 1) throw std::invalid_argument("constrained_sampling: n_doe must be >= 1");
  repair_cfg.validate();
  const BoundsSpec& b = problem.bounds();
  const int dim = b.dimension();

  std::vector<DecisionVector> accepted;
  accepted.reserve(n_doe);
  std::set<std::vector<long long>> seen;

  for (int round = 0; round < max_rounds && static_cast<int>(accepted.size()) < n_doe; ++round) {
    std::vector<DecisionVector> batch =
        lhs(n_doe, b, mix({seed, streams::kDoe, static_cast<std::uint64_t>(round)}), LhsSnap::None);

    // snap to the two-decimal grid; this ignores bin stratification on purpose
    // (the grid, not the bins, is the search space being initialized)
    for (auto& x : batch) {
      for (int j = 0; j < dim; ++j) {
        double v = grid::snap(x[j]);
        if (v < b.lower[j]) v += grid::kStep;
        if (v > b.upper[j]) v -= grid::kStep;
        x[j] = v;
      }
    }

    std::vector<RepairResult> repaired =
        repair_batch(batch, problem, repair_cfg, seed,
                     mix({streams::kDoe, static_cast<std::uint64_t>(round)}), threads);

    for (const RepairResult& r : repaired) {
      if (static_cast<int>(accepted.size()) >= n_doe) break;
      if (!r.ok()) continue;
      auto key = grid::key(r.x);
      if (!seen.insert(std::move(key)).second) continue;  // duplicate, replaced by later draws
      accepted.push_back(r.x);
    }
  }

  if (static_cast<int>(accepted.size()) < n_doe) {
    throw std::runtime_error("constrained_sampling: could not assemble " + std::to_string(n_doe) +
                             " feasible designs after " + std::to_string(max_rounds) +
                             " rounds (got " + std::to_string(accepted.size()) + ")");
  }
  return accepted;
}

}  // namespace emopt
