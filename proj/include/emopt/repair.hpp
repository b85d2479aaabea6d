// Two-phase repair operator.
//
// Phase 1 restores feasibility: minimize the squared distance to the original
// point subject to all constraints, solved as an escalating quadratic exterior
// penalty with Nelder-Mead restarts. Phase 2 restores two-decimal precision:
// walk the variables in a random permutation, rounding each to floor or ceil
// while the whole vector stays feasible; a fresh permutation is drawn when a
// variable admits neither rounding, up to rho attempts.

#pragma once

#include <vector>

#include "emopt/problem.hpp"
#include "emopt/rng.hpp"
#include "emopt/types.hpp"

namespace emopt {

struct RepairConfig {
  int max_precision_attempts = 100;  // rho
  long simplex_max_iters = 2000;
  int simplex_restarts = 3;
  std::vector<double> penalty_weights = {1e3, 1e5, 1e7};
  double interior_slack = 1e-9;  // phase-1 margin so rounding has room
  double simplex_size_tol = 1e-10;
  double initial_step_fraction = 0.02;  // per-axis step, fraction of range

  void validate() const;
};

enum class RepairStatus { Unchanged, Repaired, Failed };

struct RepairResult {
  RepairStatus status = RepairStatus::Failed;
  DecisionVector x;
  double distance = 0.0;      // euclidean distance moved from the input
  long simplex_evals = 0;     // 0 when the input was already feasible
  int permutations_used = 0;  // phase-2 attempts consumed

  bool ok() const { return status != RepairStatus::Failed; }
};

// Phase 1 only: returns a feasible continuous point closest to x, or x itself
// (Unchanged) when already feasible.
RepairResult repair_feasibility(const DecisionVector& x, const Problem& problem,
                                const RepairConfig& cfg);

// Phase 2 only: rounds a feasible continuous point onto the 0.01 grid.
RepairResult repair_precision(const DecisionVector& x, const Problem& problem,
                              const RepairConfig& cfg, Rng& rng);

// Full repair: precision o feasibility. Output is feasible and on-grid.
RepairResult repair(const DecisionVector& x, const Problem& problem, const RepairConfig& cfg,
                    Rng& rng);

// Repairs a batch concurrently; results are in input order and each item draws
// from its own substream of (seed, tag, index), so the outcome is identical
// for any thread count.
std::vector<RepairResult> repair_batch(const std::vector<DecisionVector>& batch,
                                       const Problem& problem, const RepairConfig& cfg,
                                       std::uint64_t seed, std::uint64_t tag, int threads = 0);

// Draws random grid points and repairs them until one comes out feasible.
// Replacement source for failed repairs and duplicate stalls.
DecisionVector random_feasible_design(const Problem& problem, const RepairConfig& cfg, Rng& rng);

}  // namespace emopt
