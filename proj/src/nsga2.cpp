#include "emopt/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "emopt/parallel.hpp"
#include "emopt/sampling.hpp"

namespace emopt {

bool constrained_dominates(const Individual& a, const Individual& b) {
  const bool fa = a.feasible(), fb = b.feasible();
  if (fa && !fb) return true;
  if (!fa && fb) return false;
  if (!fa && !fb) return a.con.cv < b.con.cv;
  return dominates(a.f, b.f);
}

std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop) {
  const int n = static_cast<int>(pop.size());
  for (const Individual& ind : pop)
    if (!ind.evaluated()) throw std::invalid_argument("non_dominated_sort: unevaluated member");

  std::vector<std::vector<int>> dominated_by(n);
  std::vector<int> domination_count(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (constrained_dominates(pop[i], pop[j])) {
        dominated_by[i].push_back(j);
        ++domination_count[j];
      } else if (constrained_dominates(pop[j], pop[i])) {
        dominated_by[j].push_back(i);
        ++domination_count[i];
      }
    }
  }

  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i)
    if (domination_count[i] == 0) current.push_back(i);

  while (!current.empty()) {
    for (int i : current) pop[i].rank = static_cast<int>(fronts.size());
    std::vector<int> next;
    for (int i : current)
      for (int j : dominated_by[i])
        if (--domination_count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front) {
  const int n = static_cast<int>(front.size());
  if (n == 0) return {};
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), kInfinity);
    return dist;
  }

  // identical objective vectors add no diversity: copies after the first get 0
  std::map<std::vector<double>, int> first_seen;
  std::vector<int> unique_ids;
  std::vector<char> is_copy(n, 0);
  for (int i = 0; i < n; ++i) {
    auto [it, inserted] = first_seen.emplace(front[i], i);
    if (inserted)
      unique_ids.push_back(i);
    else
      is_copy[i] = 1;
  }

  const int u = static_cast<int>(unique_ids.size());
  if (u <= 2) {
    for (int i : unique_ids) dist[i] = kInfinity;
    return dist;
  }

  const std::size_t m = front[0].size();
  for (std::size_t obj = 0; obj < m; ++obj) {
    std::vector<int> order = unique_ids;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return front[a][obj] < front[b][obj]; });
    const double lo = front[order.front()][obj];
    const double hi = front[order.back()][obj];
    dist[order.front()] = kInfinity;
    dist[order.back()] = kInfinity;
    if (hi - lo <= 0.0) continue;
    for (int k = 1; k + 1 < u; ++k) {
      if (dist[order[k]] == kInfinity) continue;
      dist[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / (hi - lo);
    }
  }
  return dist;
}

void rank_and_crowd(std::vector<Individual>& pop) {
  const auto fronts = non_dominated_sort(pop);
  for (const auto& front : fronts) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(front.size());
    for (int i : front) objs.push_back(pop[i].f);
    const std::vector<double> d = crowding_distance(objs);
    for (std::size_t k = 0; k < front.size(); ++k) pop[front[k]].crowding = d[k];
  }
}

const Individual& tournament_select(const std::vector<Individual>& pop, Rng& rng) {
  if (pop.empty()) throw std::invalid_argument("tournament_select: empty population");
  if (pop.size() == 1) return pop[0];
  // two distinct contestants
  const std::size_t i = rng.uniform_int(pop.size());
  std::size_t j = rng.uniform_int(pop.size() - 1);
  if (j >= i) ++j;
  const Individual& a = pop[i];
  const Individual& b = pop[j];
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  if (a.crowding != b.crowding) return a.crowding > b.crowding ? a : b;
  return rng.coin() ? a : b;
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const BoundsSpec& bounds,
                                                        const VariationConfig& cfg, Rng& rng) {
  DecisionVector c1 = p1, c2 = p2;
  if (rng.uniform() > cfg.crossover_prob) return {c1, c2};

  for (std::size_t j = 0; j < p1.size(); ++j) {
    if (std::abs(p1[j] - p2[j]) < 1e-14) continue;  // identical genes pass through
    const double u = rng.uniform();
    double beta;
    if (u <= 0.5)
      beta = std::pow(2.0 * u, 1.0 / (cfg.eta_c + 1.0));
    else
      beta = std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (cfg.eta_c + 1.0));

    const double a = 0.5 * ((1.0 + beta) * p1[j] + (1.0 - beta) * p2[j]);
    const double b = 0.5 * ((1.0 - beta) * p1[j] + (1.0 + beta) * p2[j]);
    c1[j] = bounds.clamp(static_cast<int>(j), a);
    c2[j] = bounds.clamp(static_cast<int>(j), b);
  }
  return {c1, c2};
}

DecisionVector polynomial_mutation(const DecisionVector& x, const BoundsSpec& bounds,
                                   const VariationConfig& cfg, Rng& rng) {
  DecisionVector y = x;
  const double pm = cfg.resolved_mutation_prob(static_cast<int>(x.size()));
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (rng.uniform() >= pm) continue;
    const double lo = bounds.lower[j], hi = bounds.upper[j];
    const double range = hi - lo;
    if (range <= 0.0) continue;

    const double d1 = (y[j] - lo) / range;
    const double d2 = (hi - y[j]) / range;
    const double u = rng.uniform();
    const double exponent = 1.0 / (cfg.eta_m + 1.0);
    double dq;
    if (u < 0.5) {
      const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, cfg.eta_m + 1.0);
      dq = std::pow(val, exponent) - 1.0;
    } else {
      const double val =
          2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, cfg.eta_m + 1.0);
      dq = 1.0 - std::pow(val, exponent);
    }
    y[j] = bounds.clamp(static_cast<int>(j), y[j] + dq * range);
  }
  return y;
}

std::vector<Individual> survival(std::vector<Individual> pool, int target_size) {
  if (static_cast<int>(pool.size()) < target_size)
    throw std::invalid_argument("survival: pool smaller than target");
  rank_and_crowd(pool);

  std::vector<int> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  // rank ascending, crowding descending, insertion index as the final tie-break
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (pool[a].rank != pool[b].rank) return pool[a].rank < pool[b].rank;
    return pool[a].crowding > pool[b].crowding;
  });

  std::vector<Individual> kept;
  kept.reserve(target_size);
  for (int i = 0; i < target_size; ++i) kept.push_back(std::move(pool[order[i]]));
  rank_and_crowd(kept);  // ranks/crowding valid within the surviving set
  return kept;
}

std::vector<Individual> eliminate_duplicates(const std::vector<DecisionVector>& existing,
                                             std::vector<Individual> candidates) {
  std::set<std::vector<long long>> seen;
  for (const DecisionVector& x : existing) seen.insert(grid::key(x));

  std::vector<Individual> kept;
  kept.reserve(candidates.size());
  for (Individual& c : candidates) {
    if (seen.insert(grid::key(c.x)).second) kept.push_back(std::move(c));
  }
  return kept;
}

namespace {

Individual make_individual(const Problem& problem, DecisionVector x) {
  Individual ind;
  ind.con = problem.constraints(x);
  ind.x = std::move(x);
  return ind;
}

Individual fresh_feasible(const Problem& problem, const RepairConfig& cfg, Rng& rng) {
  return make_individual(problem, random_feasible_design(problem, cfg, rng));
}

// manufacturing precision applies to every evaluated design, repaired or not
void snap_to_grid(DecisionVector& x, const BoundsSpec& b) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    double v = grid::snap(x[j]);
    if (v < b.lower[j]) v += grid::kStep;
    if (v > b.upper[j]) v -= grid::kStep;
    x[j] = v;
  }
}

void evaluate_batch(const Problem& problem, std::vector<Individual>& batch,
                    EvaluationBudget& budget, int threads) {
  parallel_for(
      batch.size(),
      [&](std::size_t i) {
        batch[i].f = evaluate_exact(problem, batch[i].x, budget);
        batch[i].source = EvalSource::Exact;
      },
      threads);
}

}  // namespace

RunResult nsga2_run(const Problem& problem, const RunConfig& cfg, OptMode mode,
                    EvaluationBudget& budget, const GenCallback& on_generation, int threads) {
  cfg.validate();
  const BoundsSpec& bounds = problem.bounds();
  RunResult result;

  std::set<std::vector<long long>> evaluated_keys;

  auto archive_batch = [&](int gen, std::vector<Individual>& batch, long long first_index) {
    for (std::size_t i = 0; i < batch.size(); ++i) {
      ArchiveEntry e;
      e.gen = gen;
      e.eval_index = first_index + static_cast<long long>(i);
      e.ind = batch[i];
      result.archive.push_back(std::move(e));
    }
  };

  // initial population
  std::vector<Individual> pop;
  if (mode == OptMode::WithRepair) {
    std::vector<DecisionVector> doe = constrained_sampling(
        cfg.population, problem, mix({cfg.seed, streams::kInit}), cfg.repair, 50, threads);
    for (DecisionVector& x : doe) pop.push_back(make_individual(problem, std::move(x)));
  } else {
    std::vector<DecisionVector> doe =
        lhs(cfg.population, bounds, mix({cfg.seed, streams::kInit}), LhsSnap::None);
    for (DecisionVector& x : doe) {
      snap_to_grid(x, bounds);
      pop.push_back(make_individual(problem, std::move(x)));
    }
  }

  const long long init_count = std::min<long long>(budget.remaining(), pop.size());
  pop.resize(static_cast<std::size_t>(init_count));
  const long long init_first = budget.used();
  evaluate_batch(problem, pop, budget, threads);
  for (const Individual& ind : pop) evaluated_keys.insert(grid::key(ind.x));
  rank_and_crowd(pop);
  archive_batch(0, pop, init_first);
  if (on_generation) on_generation(0, pop, result.archive);

  if (budget.exhausted() || static_cast<int>(pop.size()) < 2) {
    result.final_pop = std::move(pop);
    return result;
  }

  int gen = 0;
  while (!budget.exhausted()) {
    ++gen;
    Rng var_rng(mix({cfg.seed, streams::kVariation, static_cast<std::uint64_t>(gen)}));

    // variation: offspring built from tournament-selected parent pairs
    std::vector<DecisionVector> raw_children;
    raw_children.reserve(cfg.offspring);
    while (static_cast<int>(raw_children.size()) < cfg.offspring) {
      const Individual& p1 = tournament_select(pop, var_rng);
      const Individual& p2 = tournament_select(pop, var_rng);
      auto [c1, c2] = sbx_crossover(p1.x, p2.x, bounds, cfg.variation, var_rng);
      raw_children.push_back(polynomial_mutation(c1, bounds, cfg.variation, var_rng));
      if (static_cast<int>(raw_children.size()) < cfg.offspring)
        raw_children.push_back(polynomial_mutation(c2, bounds, cfg.variation, var_rng));
    }

    std::vector<Individual> children;
    children.reserve(raw_children.size());
    if (mode == OptMode::WithRepair) {
      std::vector<RepairResult> repaired =
          repair_batch(raw_children, problem, cfg.repair, cfg.seed,
                       static_cast<std::uint64_t>(gen), threads);
      for (std::size_t i = 0; i < repaired.size(); ++i) {
        if (repaired[i].ok()) {
          children.push_back(make_individual(problem, std::move(repaired[i].x)));
        } else {
          Rng sub(mix({cfg.seed, streams::kStall, static_cast<std::uint64_t>(gen),
                       static_cast<std::uint64_t>(i)}));
          children.push_back(fresh_feasible(problem, cfg.repair, sub));
        }
      }
      // drop grid duplicates of anything already evaluated
      std::vector<Individual> unique;
      unique.reserve(children.size());
      std::set<std::vector<long long>> batch_keys;
      for (Individual& c : children) {
        auto key = grid::key(c.x);
        if (evaluated_keys.count(key) || !batch_keys.insert(key).second) continue;
        unique.push_back(std::move(c));
      }
      if (unique.empty()) {
        // every child was a duplicate; inject a fresh design to keep moving
        Rng sub(mix({cfg.seed, streams::kStall, static_cast<std::uint64_t>(gen), 0xffffULL}));
        for (int attempt = 0; attempt < 1000 && unique.empty(); ++attempt) {
          Individual fresh = fresh_feasible(problem, cfg.repair, sub);
          if (!evaluated_keys.count(grid::key(fresh.x))) unique.push_back(std::move(fresh));
        }
      }
      children = std::move(unique);
    } else {
      for (DecisionVector& x : raw_children) {
        snap_to_grid(x, bounds);
        children.push_back(make_individual(problem, std::move(x)));
      }
    }

    if (children.empty()) break;

    const long long fit = std::min<long long>(budget.remaining(), children.size());
    children.resize(static_cast<std::size_t>(fit));
    const long long first_index = budget.used();
    evaluate_batch(problem, children, budget, threads);
    for (const Individual& c : children) evaluated_keys.insert(grid::key(c.x));

    std::vector<Individual> pool = pop;
    pool.insert(pool.end(), children.begin(), children.end());
    rank_and_crowd(pool);
    // archive the batch with the ranks they earned in the merge
    std::vector<Individual> batch_ranked(pool.end() - children.size(), pool.end());
    archive_batch(gen, batch_ranked, first_index);

    pop = survival(std::move(pool), cfg.population);
    if (on_generation) on_generation(gen, pop, result.archive);
  }

  result.generations = gen;
  result.final_pop = std::move(pop);
  return result;
}

}  // namespace emopt
