#include "emopt/problem.hpp"

#include <stdexcept>

#include "emopt/ipm.hpp"

namespace emopt {

void BoundsSpec::validate() const {
  if (lower.size() != upper.size() || lower.empty())
    throw std::invalid_argument("bounds: lower/upper size mismatch");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("bounds: lower must be strictly below upper");
}

bool BoundsSpec::contains(const DecisionVector& x, double tol) const {
  if (static_cast<int>(x.size()) != dimension()) return false;
  for (int i = 0; i < dimension(); ++i)
    if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
  return true;
}

ConstraintReport evaluate_constraints(const Problem& p, const DecisionVector& x) {
  if (static_cast<int>(x.size()) != p.dimension())
    throw std::invalid_argument("evaluate_constraints: dimension mismatch");
  return p.constraints(x);
}

ObjectiveVector to_min_form(const Problem& p, ObjectiveVector raw) {
  const auto& mx = p.maximize();
  for (std::size_t m = 0; m < raw.size(); ++m)
    if (mx[m]) raw[m] = -raw[m];
  return raw;
}

ObjectiveVector to_raw_form(const Problem& p, ObjectiveVector f) {
  return to_min_form(p, std::move(f));  // negation is its own inverse
}

ObjectiveVector evaluate_exact(const Problem& p, const DecisionVector& x, EvaluationBudget& budget) {
  if (static_cast<int>(x.size()) != p.dimension())
    throw std::invalid_argument("evaluate_exact: dimension mismatch");
  budget.charge();
  return to_min_form(p, p.raw_objectives(x));
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: length mismatch");
  bool strictly = false;
  for (std::size_t m = 0; m < a.size(); ++m) {
    if (a[m] > b[m]) return false;
    if (a[m] < b[m]) strictly = true;
  }
  return strictly;
}

bool is_dominated(const ObjectiveVector& a, const ObjectiveVector& b) { return dominates(b, a); }

std::vector<std::string> problem_names() { return {"ipm-proxy-v1", "bnh"}; }

std::unique_ptr<Problem> make_problem(const std::string& name) {
  if (name == "ipm-proxy-v1") return std::make_unique<ipm::IpmProxyProblem>();
  if (name == "bnh") return std::make_unique<BnhProblem>();
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace emopt
