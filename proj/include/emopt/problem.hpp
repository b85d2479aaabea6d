// Problem abstraction: cheap analytic constraints plus expensive objectives.
//
// Internally every objective is minimized. Problems report which raw
// objectives are maximized; evaluate_exact() negates those at the boundary and
// to_raw_form() undoes it for reports and CSV output.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "emopt/types.hpp"

namespace emopt {

class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string name() const = 0;
  virtual const BoundsSpec& bounds() const = 0;
  virtual int n_obj() const = 0;
  virtual int n_con() const = 0;

  // true at index m when raw objective m is maximized.
  virtual const std::vector<bool>& maximize() const = 0;

  // Inexpensive analytic constraints; never counts against the budget.
  virtual ConstraintReport constraints(const DecisionVector& x) const = 0;

  // The expensive evaluation, in the problem's natural (raw) orientation.
  virtual ObjectiveVector raw_objectives(const DecisionVector& x) const = 0;

  int dimension() const { return bounds().dimension(); }
};

ConstraintReport evaluate_constraints(const Problem& p, const DecisionVector& x);

ObjectiveVector to_min_form(const Problem& p, ObjectiveVector raw);
ObjectiveVector to_raw_form(const Problem& p, ObjectiveVector f);

// Charges one exact evaluation and returns minimization-form objectives.
ObjectiveVector evaluate_exact(const Problem& p, const DecisionVector& x, EvaluationBudget& budget);

// Pareto dominance, minimization: does a dominate b?
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);
// true iff b dominates a.
bool is_dominated(const ObjectiveVector& a, const ObjectiveVector& b);

// Benchmark registry.
std::vector<std::string> problem_names();
std::unique_ptr<Problem> make_problem(const std::string& name);

}  // namespace emopt
