// Latin hypercube sampling and feasible-by-construction initialization.

#pragma once

#include <cstdint>
#include <vector>

#include "emopt/problem.hpp"
#include "emopt/repair.hpp"
#include "emopt/types.hpp"

namespace emopt {

enum class LhsSnap {
  None,  // raw stratified samples
  Grid,  // snap each value to the 0.01 grid point nearest within its bin
};

// Stratified samples: each variable is split into n equal bins with exactly
// one sample per bin. Grid snapping keeps the sample inside its bin and
// refuses (PrecisionConflict) when a bin is narrower than the grid step, since
// one-per-bin stratification cannot survive rounding there.
std::vector<DecisionVector> lhs(int n, const BoundsSpec& bounds, std::uint64_t seed,
                                LhsSnap snap = LhsSnap::Grid);

// Exactly n_doe distinct feasible two-decimal designs: LHS batches are snapped
// to the grid, infeasible members repaired, duplicates dropped, and fresh
// batches drawn until the quota is met (at most max_rounds batches).
std::vector<DecisionVector> constrained_sampling(int n_doe, const Problem& problem,
                                                 std::uint64_t seed,
                                                 const RepairConfig& repair_cfg = {},
                                                 int max_rounds = 50, int threads = 0);

}  // namespace emopt
