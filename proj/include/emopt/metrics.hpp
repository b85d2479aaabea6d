// Performance metrics and a-posteriori decision-making: exact bi-objective
// hypervolume, hypervolume-versus-evaluations traces, the trade-off selector,
// and constraint feasibility statistics.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "emopt/nsga2.hpp"
#include "emopt/problem.hpp"

namespace emopt {

// Normalization box for hypervolume: best and worst point per objective
// (minimization form), taken from the combined solution sets under comparison.
struct HvReference {
  ObjectiveVector best;
  ObjectiveVector worst;

  void validate() const;
};

// Box spanned by the union of the given objective sets.
HvReference combined_reference(const std::vector<std::vector<ObjectiveVector>>& sets);

// Exact sweep hypervolume of a bi-objective front, normalized to [0, 1].
// Points outside the reference box are clipped out (with a note on stderr
// unless warn_clipped is false); dominated and duplicate members are filtered.
double hypervolume2d(const std::vector<ObjectiveVector>& front, const HvReference& ref,
                     bool warn_clipped = true);

// Hypervolume of the feasible non-dominated subset of the first t archive
// entries, for t = stride, 2*stride, ...; always includes the full archive as
// the last point. Non-decreasing in t.
std::vector<std::pair<long long, double>> rhve(const std::vector<ArchiveEntry>& archive,
                                               const HvReference& ref, long long stride);

// Pointwise median of several traces sharing the same evaluation grid.
std::vector<std::pair<long long, double>> median_trace(
    const std::vector<std::vector<std::pair<long long, double>>>& traces);

struct TradeoffEntry {
  int index = 0;       // position in the input front
  double value = 0.0;  // max over neighbors of average loss per unit average gain
};

// Trade-off of each member of a non-dominated front (minimization form), the
// whole front acting as every point's neighborhood. Sorted descending by
// value. Fronts of size < 2 yield an empty result.
std::vector<TradeoffEntry> tradeoff(const std::vector<ObjectiveVector>& front);

struct FeasibilityStats {
  long long total = 0;
  double feasible_fraction = 0.0;
  std::vector<double> violation_fraction;  // per constraint
  std::vector<int> rank;                   // dense rank, 1 = most violated
};

// Repeated Latin-hypercube feasibility experiment (batches x batch_size).
FeasibilityStats feasibility_study(const Problem& problem, int batches, int batch_size,
                                   std::uint64_t seed, int threads = 0);

}  // namespace emopt
