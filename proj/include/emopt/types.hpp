// Core value types shared by every module.

#pragma once

#include <atomic>
#include <cstdint>
#include <limits>
#include <vector>

#include "emopt/common.hpp"

namespace emopt {

struct BoundsSpec {
  std::vector<double> lower;
  std::vector<double> upper;

  int dimension() const { return static_cast<int>(lower.size()); }

  void validate() const;

  bool contains(const DecisionVector& x, double tol = 0.0) const;

  double range(int i) const { return upper[i] - lower[i]; }

  double clamp(int i, double v) const {
    if (v < lower[i]) return lower[i];
    if (v > upper[i]) return upper[i];
    return v;
  }
};

// Constraint values g_j; a point is feasible iff no g_j is positive and no
// intermediate geometric quantity was undefined.
struct ConstraintReport {
  std::vector<double> g;
  bool degenerate = false;
  double cv = 0.0;  // sum of positive parts; includes the degeneracy sentinel

  bool feasible() const { return !degenerate && cv == 0.0; }

  static ConstraintReport from_values(std::vector<double> values, bool degenerate_flag = false) {
    ConstraintReport r;
    r.g = std::move(values);
    r.degenerate = degenerate_flag;
    for (double v : r.g)
      if (v > 0.0) r.cv += v;
    return r;
  }
};

// Exact (budget-counted) vs surrogate-approximated objective values.
enum class EvalSource : std::uint8_t { Exact, Surrogate };

struct Individual {
  DecisionVector x;
  ObjectiveVector f;  // minimization form; empty until evaluated
  ConstraintReport con;
  int rank = -1;
  double crowding = 0.0;
  EvalSource source = EvalSource::Exact;

  bool evaluated() const { return !f.empty(); }
  bool feasible() const { return con.feasible(); }
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Counter for exact solution evaluations. Constraint and surrogate calls never
// touch it. Thread-safe: concurrent exact evaluations reserve slots atomically.
class EvaluationBudget {
 public:
  explicit EvaluationBudget(long long max_evals) : max_(max_evals) {}

  long long used() const { return used_.load(std::memory_order_relaxed); }
  long long limit() const { return max_; }
  long long remaining() const { return max_ - used(); }
  bool exhausted() const { return used() >= max_; }

  // Reserve one evaluation; throws once the limit is hit.
  void charge() {
    long long before = used_.fetch_add(1, std::memory_order_relaxed);
    if (before >= max_) {
      used_.fetch_sub(1, std::memory_order_relaxed);
      throw BudgetExhausted();
    }
  }

 private:
  std::atomic<long long> used_{0};
  long long max_;
};

}  // namespace emopt
