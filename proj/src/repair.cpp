#include "emopt/repair.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emopt/nelder_mead.hpp"
#include "emopt/parallel.hpp"

namespace emopt {

void RepairConfig::validate() const {
  if (max_precision_attempts < 1) throw std::invalid_argument("repair: rho must be >= 1");
  if (penalty_weights.empty()) throw std::invalid_argument("repair: need penalty weights");
  for (std::size_t i = 1; i < penalty_weights.size(); ++i)
    if (penalty_weights[i] <= penalty_weights[i - 1])
      throw std::invalid_argument("repair: penalty weights must be strictly increasing");
}

namespace {

double distance(const DecisionVector& a, const DecisionVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

bool feasible_with_slack(const Problem& p, const DecisionVector& x, double slack) {
  const ConstraintReport r = p.constraints(x);
  if (r.degenerate) return false;
  for (double v : r.g)
    if (v > -slack) return false;
  return true;
}

}  // namespace

RepairResult repair_feasibility(const DecisionVector& x, const Problem& problem,
                                const RepairConfig& cfg) {
  RepairResult result;
  result.x = x;

  if (problem.constraints(x).feasible()) {
    result.status = RepairStatus::Unchanged;
    return result;
  }

  const BoundsSpec& b = problem.bounds();
  const int n = problem.dimension();
  const double slack = cfg.interior_slack;

  // The exterior-penalty minimum sits a hair outside the feasible set, so the
  // final simplex point alone is not enough: every point the search touches is
  // screened and the closest strictly feasible one wins.
  bool found = false;
  double found_dist2 = 0.0;
  DecisionVector found_x;
  DecisionVector best = x;
  double best_penalty = kInfinity;

  bool stop = false;
  long stall = 0;  // evals since the tracked feasible point last improved
  constexpr long kStallLimit = 300;

  for (double weight : cfg.penalty_weights) {
    auto penalized = [&](const std::vector<double>& p) {
      const ConstraintReport r = problem.constraints(p);
      double violation = 0.0;
      bool inside = !r.degenerate;
      for (double v : r.g) {
        const double excess = std::max(0.0, v + slack);
        violation += excess * excess;
        if (v > -slack) inside = false;
      }
      double dist2 = 0.0;
      for (int i = 0; i < n; ++i) dist2 += (x[i] - p[i]) * (x[i] - p[i]);
      if (inside && (!found || dist2 < found_dist2)) {
        found = true;
        found_dist2 = dist2;
        found_x = p;
        stall = 0;
      } else if (found && ++stall > kStallLimit) {
        stop = true;
      }
      return dist2 + weight * violation;
    };

    for (int restart = 0; restart < cfg.simplex_restarts; ++restart) {
      std::vector<double> steps(n);
      for (int i = 0; i < n; ++i)
        steps[i] = cfg.initial_step_fraction * b.range(i) * static_cast<double>(1 + restart);

      SimplexOptions opts;
      opts.max_iters = cfg.simplex_max_iters;
      opts.size_tol = cfg.simplex_size_tol;
      opts.bounds = &b;
      opts.stop = &stop;

      // first attempt starts at x itself so the search stays local
      const DecisionVector& start = (restart == 0) ? x : best;
      SimplexResult sr = nelder_mead(penalized, start, steps, opts);
      result.simplex_evals += sr.evals;

      if (found) {
        result.status = RepairStatus::Repaired;
        result.x = std::move(found_x);
        result.distance = std::sqrt(found_dist2);
        return result;
      }
      const double p = penalized(sr.x);
      if (p < best_penalty) {
        best_penalty = p;
        best = sr.x;
      }
    }
  }

  result.status = RepairStatus::Failed;
  return result;
}

RepairResult repair_precision(const DecisionVector& x, const Problem& problem,
                              const RepairConfig& cfg, Rng& rng) {
  RepairResult result;
  result.x = x;
  const int n = problem.dimension();
  const BoundsSpec& b = problem.bounds();

  if (grid::on_grid(x) && problem.constraints(x).feasible()) {
    result.status = RepairStatus::Unchanged;
    // canonicalize the representation so downstream grid keys are exact
    for (double& v : result.x) v = grid::snap(v);
    return result;
  }

  for (int attempt = 1; attempt <= cfg.max_precision_attempts; ++attempt) {
    result.permutations_used = attempt;
    const std::vector<int> order = rng.permutation(n);

    DecisionVector y = x;
    bool walk_ok = true;
    for (int idx : order) {
      const double lo = grid::floor_to(y[idx]);
      const double hi = grid::ceil_to(y[idx]);
      // nearer rounding first, ties toward floor
      double first = (y[idx] - lo <= hi - y[idx]) ? lo : hi;
      double second = (first == lo) ? hi : lo;

      bool rounded = false;
      for (double candidate : {first, second}) {
        if (candidate < b.lower[idx] - 1e-12 || candidate > b.upper[idx] + 1e-12) continue;
        const double saved = y[idx];
        y[idx] = candidate;
        if (problem.constraints(y).feasible()) {
          rounded = true;
          break;
        }
        y[idx] = saved;
      }
      if (!rounded) {
        walk_ok = false;
        break;
      }
    }

    if (walk_ok) {
      result.status = RepairStatus::Repaired;
      result.x = std::move(y);
      result.distance = distance(x, result.x);
      return result;
    }
  }

  result.status = RepairStatus::Failed;
  return result;
}

RepairResult repair(const DecisionVector& x, const Problem& problem, const RepairConfig& cfg,
                    Rng& rng) {
  if (grid::on_grid(x) && problem.constraints(x).feasible()) {
    RepairResult result;
    result.status = RepairStatus::Unchanged;
    result.x = x;
    for (double& v : result.x) v = grid::snap(v);
    return result;
  }

  RepairResult phase1 = repair_feasibility(x, problem, cfg);
  if (!phase1.ok()) return phase1;

  RepairResult phase2 = repair_precision(phase1.x, problem, cfg, rng);
  phase2.simplex_evals = phase1.simplex_evals;
  if (!phase2.ok()) return phase2;

  if (phase1.status == RepairStatus::Repaired) phase2.status = RepairStatus::Repaired;
  phase2.distance = distance(x, phase2.x);
  return phase2;
}

DecisionVector random_feasible_design(const Problem& problem, const RepairConfig& cfg, Rng& rng) {
  const BoundsSpec& b = problem.bounds();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    DecisionVector x(b.dimension());
    for (int j = 0; j < b.dimension(); ++j) {
      double v = grid::snap(rng.uniform(b.lower[j], b.upper[j]));
      if (v < b.lower[j]) v += grid::kStep;
      if (v > b.upper[j]) v -= grid::kStep;
      x[j] = v;
    }
    RepairResult r = repair(x, problem, cfg, rng);
    if (r.ok()) return r.x;
  }
  throw std::runtime_error("could not sample a feasible design");
}

std::vector<RepairResult> repair_batch(const std::vector<DecisionVector>& batch,
                                       const Problem& problem, const RepairConfig& cfg,
                                       std::uint64_t seed, std::uint64_t tag, int threads) {
  std::vector<RepairResult> results(batch.size());
  parallel_for(
      batch.size(),
      [&](std::size_t i) {
        Rng rng(mix({seed, streams::kRepair, tag, static_cast<std::uint64_t>(i)}));
        results[i] = repair(batch[i], problem, cfg, rng);
      },
      threads);
  return results;
}

}  // namespace emopt
