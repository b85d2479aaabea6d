// Shared aliases, error types, and two-decimal grid helpers.
//
// Every design variable lives on a 0.01 grid (manufacturing accuracy), so the
// grid helpers here are the single source of truth for rounding, grid
// membership, and grid-equality keys used by duplicate elimination.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace emopt {

using DecisionVector = std::vector<double>;
using ObjectiveVector = std::vector<double>;

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted() : std::runtime_error("exact-evaluation budget exhausted") {}
};

class FitFailed : public std::runtime_error {
 public:
  explicit FitFailed(const std::string& what) : std::runtime_error(what) {}
};

class PrecisionConflict : public std::runtime_error {
 public:
  explicit PrecisionConflict(const std::string& what) : std::runtime_error(what) {}
};

namespace grid {

constexpr double kStep = 0.01;

// Integer grid coordinate of the nearest grid point.
inline long long index_of(double v) { return std::llround(v * 100.0); }

inline bool on_grid(double v, double tol = 1e-9) {
  return std::abs(v * 100.0 - static_cast<double>(index_of(v))) < tol;
}

inline bool on_grid(const DecisionVector& x, double tol = 1e-9) {
  for (double v : x)
    if (!on_grid(v, tol)) return false;
  return true;
}

// Nearest grid point, ties toward the smaller value.
inline double snap(double v) { return std::ceil(v * 100.0 - 0.5) / 100.0; }

// Floor/ceil to the grid; values already on the grid map to themselves.
inline double floor_to(double v) {
  double s = v * 100.0;
  long long n = std::llround(s);
  if (std::abs(s - static_cast<double>(n)) < 1e-9) return static_cast<double>(n) / 100.0;
  return std::floor(s) / 100.0;
}

inline double ceil_to(double v) {
  double s = v * 100.0;
  long long n = std::llround(s);
  if (std::abs(s - static_cast<double>(n)) < 1e-9) return static_cast<double>(n) / 100.0;
  return std::ceil(s) / 100.0;
}

// Equality key for duplicate elimination in decision space.
inline std::vector<long long> key(const DecisionVector& x) {
  std::vector<long long> k(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) k[i] = index_of(x[i]);
  return k;
}

}  // namespace grid

}  // namespace emopt
