// Derivative-free simplex search (Nelder-Mead), shared by the feasibility
// repair phase and the Kriging likelihood fit. Standard coefficients
// (reflection 1, expansion 2, contraction 0.5, shrink 0.5); candidate points
// are reflected back off the box bounds and clamped when one is supplied.

#pragma once

#include <functional>
#include <vector>

#include "emopt/types.hpp"

namespace emopt {

struct SimplexOptions {
  long max_iters = 2000;
  double size_tol = 1e-10;          // terminate when the simplex collapses
  const BoundsSpec* bounds = nullptr;
  const bool* stop = nullptr;       // external early-stop, checked per iteration
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  long iters = 0;
  long evals = 0;
};

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& start,
                          const std::vector<double>& steps,
                          const SimplexOptions& options);

}  // namespace emopt
