// Surrogate-assisted optimization cycle: DOE, per-cycle model selection,
// k-generation surrogate optimization with repair, duplicate elimination,
// k-means + crowding-roulette infill selection, exact evaluation, archive
// merge. Runs until the exact-evaluation budget is spent.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "emopt/nsga2.hpp"
#include "emopt/problem.hpp"
#include "emopt/run_config.hpp"
#include "emopt/surrogate.hpp"

namespace emopt {

// Every exactly-evaluated individual in evaluation order, with a lookup index
// on grid-rounded decision vectors so duplicates can never enter.
class Archive {
 public:
  bool contains(const DecisionVector& x) const;

  // false (and no insert) when the rounded decision vector is already present
  bool add(int cycle, Individual ind);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  long long size() const { return static_cast<long long>(entries_.size()); }

  std::vector<DecisionVector> decision_vectors() const;
  std::vector<double> objective_column(int m) const;

 private:
  std::vector<ArchiveEntry> entries_;
  std::set<std::vector<long long>> keys_;
};

struct CycleLog {
  int cycle = 0;
  long long archive_size_before = 0;
  std::string model_label[2];
  int infill_count = 0;
  double infill_mse[2] = {0.0, 0.0};  // predicted vs exact, per objective
  bool fallback = false;              // surrogate fit failed, direct WR cycle ran
  bool stalled = false;               // candidates all duplicate, injected samples
};

struct ModelSelectionRow {
  int cycle = 0;
  int objective = 0;
  std::string winner;
  std::vector<SelectionEntry> entries;
};

struct SaResult {
  Archive archive;
  std::vector<CycleLog> cycles;
  std::vector<ModelSelectionRow> model_rows;
};

// NSGA-II-WR on the surrogate problem for k generations, starting from the
// best archive members (padded with constrained samples below the population
// size). Objectives come from the pair's models, constraints from the real
// inexpensive evaluator, and every member is repaired feasible and on-grid.
// Consumes no exact evaluations.
std::vector<Individual> surrogate_optimize(const Archive& archive, const SurrogatePair& pair,
                                           const Problem& problem, int k, const RunConfig& cfg,
                                           int cycle, int threads = 0);

// Picks at most n infills: k-means (k = n) over unit-box-normalized predicted
// objectives, then one roulette draw per cluster weighted by predicted
// crowding distance (boundary points get twice the largest finite weight).
// Candidates must already be deduplicated against the archive.
std::vector<Individual> select_infill(const std::vector<Individual>& candidates, int n, Rng& rng);

SaResult run_sa(const Problem& problem, const RunConfig& cfg, int threads = 0);

}  // namespace emopt
