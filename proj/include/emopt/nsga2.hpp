// NSGA-II core: fast non-dominated sorting under constrained domination,
// crowding distance, binary tournament, SBX crossover, polynomial mutation,
// elitist survival, duplicate elimination, and the generational run loop.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "emopt/problem.hpp"
#include "emopt/rng.hpp"
#include "emopt/run_config.hpp"
#include "emopt/types.hpp"

namespace emopt {

// Constrained domination: feasible beats infeasible, infeasible compared by
// total violation, feasible by Pareto dominance.
bool constrained_dominates(const Individual& a, const Individual& b);

// Assigns ranks and returns the fronts as index lists. Every member must be
// evaluated.
std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop);

// Crowding distances for one front of objective vectors. Extreme points (and
// every member of a front of size <= 2) get +infinity.
std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front);

// Runs a sort and writes rank + crowding into the population.
void rank_and_crowd(std::vector<Individual>& pop);

// Binary tournament: lower rank wins, larger crowding breaks rank ties, a fair
// coin breaks exact ties. Requires ranks/crowding to be assigned.
const Individual& tournament_select(const std::vector<Individual>& pop, Rng& rng);

// Bounded SBX; with probability 1 - crossover_prob the children are copies.
std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const BoundsSpec& bounds,
                                                        const VariationConfig& cfg, Rng& rng);

DecisionVector polynomial_mutation(const DecisionVector& x, const BoundsSpec& bounds,
                                   const VariationConfig& cfg, Rng& rng);

// Elitist survival to target_size: whole fronts first, the split front by
// descending crowding with insertion order breaking exact ties. Returns the
// survivors with ranks and crowding assigned.
std::vector<Individual> survival(std::vector<Individual> pool, int target_size);

// Drops candidates whose decision vector (exact equality on the 0.01 grid)
// appears in `existing` or earlier in `candidates`.
std::vector<Individual> eliminate_duplicates(const std::vector<DecisionVector>& existing,
                                             std::vector<Individual> candidates);

enum class OptMode { Plain, WithRepair };

struct ArchiveEntry {
  int gen = 0;
  long long eval_index = 0;
  Individual ind;
};

struct RunResult {
  std::vector<ArchiveEntry> archive;  // every exactly-evaluated individual, in order
  std::vector<Individual> final_pop;
  int generations = 0;
};

using GenCallback =
    std::function<void(int gen, const std::vector<Individual>& pop,
                       const std::vector<ArchiveEntry>& archive)>;

// Generational NSGA-II. Every evaluated design lies on the two-decimal grid
// (manufacturing precision). Plain mode snaps offspring and may evaluate
// infeasible designs (constrained domination sorts them back); WithRepair
// initializes feasible-by-construction, repairs every offspring feasible, and
// never re-evaluates a grid point. Terminates cleanly when the budget runs
// out mid-generation.
RunResult nsga2_run(const Problem& problem, const RunConfig& cfg, OptMode mode,
                    EvaluationBudget& budget, const GenCallback& on_generation = {},
                    int threads = 0);

}  // namespace emopt
