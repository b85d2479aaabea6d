#include "emopt/saloop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emopt/kmeans.hpp"
#include "emopt/parallel.hpp"
#include "emopt/sampling.hpp"

namespace emopt {

bool Archive::contains(const DecisionVector& x) const { return keys_.count(grid::key(x)) > 0; }

bool Archive::add(int cycle, Individual ind) {
  if (!keys_.insert(grid::key(ind.x)).second) return false;
  ArchiveEntry e;
  e.gen = cycle;
  e.eval_index = static_cast<long long>(entries_.size());
  e.ind = std::move(ind);
  entries_.push_back(std::move(e));
  return true;
}

std::vector<DecisionVector> Archive::decision_vectors() const {
  std::vector<DecisionVector> xs;
  xs.reserve(entries_.size());
  for (const auto& e : entries_) xs.push_back(e.ind.x);
  return xs;
}

std::vector<double> Archive::objective_column(int m) const {
  std::vector<double> col;
  col.reserve(entries_.size());
  for (const auto& e : entries_) col.push_back(e.ind.f[static_cast<std::size_t>(m)]);
  return col;
}

namespace {

Individual make_individual(const Problem& problem, DecisionVector x) {
  Individual ind;
  ind.con = problem.constraints(x);
  ind.x = std::move(x);
  return ind;
}

void predict_objectives(const SurrogatePair& pair, Individual& ind) {
  ind.f.resize(pair.models.size());
  for (std::size_t m = 0; m < pair.models.size(); ++m) ind.f[m] = predict(pair.models[m], ind.x);
  ind.source = EvalSource::Surrogate;
}

// Best archive members under constrained domination on their exact values,
// padded with constrained samples when the archive is smaller than the target.
std::vector<Individual> starting_population(const Archive& archive, const Problem& problem,
                                            const RunConfig& cfg, int cycle, int threads) {
  std::vector<Individual> pop;
  for (const ArchiveEntry& e : archive.entries()) pop.push_back(e.ind);

  if (static_cast<int>(pop.size()) > cfg.population) {
    pop = survival(std::move(pop), cfg.population);
  } else if (static_cast<int>(pop.size()) < cfg.population) {
    const int missing = cfg.population - static_cast<int>(pop.size());
    std::vector<DecisionVector> pad = constrained_sampling(
        missing + static_cast<int>(pop.size()), problem,
        mix({cfg.seed, streams::kSurrogateGen, static_cast<std::uint64_t>(cycle), 0x9adULL}),
        cfg.repair, 50, threads);
    std::set<std::vector<long long>> seen;
    for (const Individual& ind : pop) seen.insert(grid::key(ind.x));
    for (DecisionVector& x : pad) {
      if (static_cast<int>(pop.size()) >= cfg.population) break;
      if (!seen.insert(grid::key(x)).second) continue;
      pop.push_back(make_individual(problem, std::move(x)));
    }
  }
  return pop;
}

}  // namespace

std::vector<Individual> surrogate_optimize(const Archive& archive, const SurrogatePair& pair,
                                           const Problem& problem, int k, const RunConfig& cfg,
                                           int cycle, int threads) {
  if (archive.size() == 0) throw std::invalid_argument("surrogate_optimize: empty archive");

  std::vector<Individual> pop = starting_population(archive, problem, cfg, cycle, threads);
  for (Individual& ind : pop) predict_objectives(pair, ind);
  rank_and_crowd(pop);

  const BoundsSpec& bounds = problem.bounds();
  const std::uint64_t c = static_cast<std::uint64_t>(cycle);

  for (int gen = 1; gen <= k; ++gen) {
    const std::uint64_t g = static_cast<std::uint64_t>(gen);
    Rng var_rng(mix({cfg.seed, streams::kSurrogateGen, c, g}));

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

    std::vector<RepairResult> repaired = repair_batch(
        raw_children, problem, cfg.repair, cfg.seed, mix({streams::kSurrogateRepair, c, g}),
        threads);

    std::vector<Individual> children;
    children.reserve(repaired.size());
    for (std::size_t i = 0; i < repaired.size(); ++i) {
      if (repaired[i].ok()) {
        children.push_back(make_individual(problem, std::move(repaired[i].x)));
      } else {
        Rng sub(mix({cfg.seed, streams::kStall, c, g, static_cast<std::uint64_t>(i)}));
        children.push_back(
            make_individual(problem, random_feasible_design(problem, cfg.repair, sub)));
      }
    }
    for (Individual& ch : children) predict_objectives(pair, ch);

    pop.insert(pop.end(), std::make_move_iterator(children.begin()),
               std::make_move_iterator(children.end()));
    pop = survival(std::move(pop), cfg.population);
  }
  return pop;
}

std::vector<Individual> select_infill(const std::vector<Individual>& candidates, int n, Rng& rng) {
  if (n < 1 || candidates.empty()) return {};
  if (static_cast<int>(candidates.size()) <= n) return candidates;

  const std::size_t count = candidates.size();
  const std::size_t n_obj = candidates[0].f.size();

  // normalize predicted objectives to the unit box over the candidate set
  std::vector<std::vector<double>> points(count, std::vector<double>(n_obj));
  for (std::size_t m = 0; m < n_obj; ++m) {
    double lo = candidates[0].f[m], hi = candidates[0].f[m];
    for (const Individual& c : candidates) {
      lo = std::min(lo, c.f[m]);
      hi = std::max(hi, c.f[m]);
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < count; ++i)
      points[i][m] = range > 0.0 ? (candidates[i].f[m] - lo) / range : 0.5;
  }

  const KmeansResult clusters = kmeans(points, n, rng);

  // roulette weights: predicted crowding on the first front; later fronts get
  // the smallest finite weight; infinite crowding becomes twice the largest
  // finite weight so boundary points are favored but not certain
  std::vector<Individual> ranked = candidates;
  rank_and_crowd(ranked);
  double max_finite = 0.0, min_finite = kInfinity;
  for (const Individual& ind : ranked) {
    if (ind.rank != 0 || ind.crowding == kInfinity) continue;
    max_finite = std::max(max_finite, ind.crowding);
    min_finite = std::min(min_finite, ind.crowding);
  }
  if (min_finite == kInfinity) {  // every first-front point is a boundary point
    max_finite = 1.0;
    min_finite = 1.0;
  }
  std::vector<double> weight(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (ranked[i].rank != 0)
      weight[i] = min_finite;
    else
      weight[i] = ranked[i].crowding == kInfinity ? 2.0 * max_finite : ranked[i].crowding;
  }

  std::vector<Individual> picked;
  picked.reserve(n);
  for (int c = 0; c < n; ++c) {
    std::vector<std::size_t> members;
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (clusters.assignment[i] != c) continue;
      members.push_back(i);
      total += weight[i];
    }
    if (members.empty()) continue;  // empty clusters are skipped

    std::size_t chosen = members.back();
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i : members) {
        acc += weight[i];
        if (acc >= target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = members[rng.uniform_int(members.size())];
    }
    picked.push_back(candidates[chosen]);
  }
  return picked;
}

SaResult run_sa(const Problem& problem, const RunConfig& cfg, int threads) {
  cfg.validate();
  SaResult result;
  EvaluationBudget budget(cfg.ese_max);

  // design of experiments: feasible by construction
  {
    std::vector<DecisionVector> doe = constrained_sampling(
        cfg.n_doe, problem, mix({cfg.seed, streams::kDoe}), cfg.repair, 50, threads);
    std::vector<Individual> batch;
    batch.reserve(doe.size());
    for (DecisionVector& x : doe) batch.push_back(make_individual(problem, std::move(x)));
    parallel_for(
        batch.size(), [&](std::size_t i) { batch[i].f = evaluate_exact(problem, batch[i].x, budget); },
        threads);
    for (Individual& ind : batch) result.archive.add(0, std::move(ind));
  }

  int cycle = 0;
  while (budget.remaining() > 0) {
    ++cycle;
    CycleLog log;
    log.cycle = cycle;
    log.archive_size_before = result.archive.size();

    const int n_pick =
        static_cast<int>(std::min<long long>(cfg.n_infill, budget.remaining()));

    std::vector<Individual> infills;
    SurrogatePair pair;
    bool fitted = false;
    if (result.archive.size() >= 10) {
      try {
        const std::vector<DecisionVector> X = result.archive.decision_vectors();
        for (int m = 0; m < problem.n_obj(); ++m) {
          ModelSelectionRow row;
          row.cycle = cycle;
          row.objective = m;
          SelectionReport report;
          pair.models.push_back(select_model(
              X, result.archive.objective_column(m), candidate_specs(),
              mix({cfg.seed, streams::kFitSplit, static_cast<std::uint64_t>(cycle),
                   static_cast<std::uint64_t>(m)}),
              &report, threads));
          row.winner = pair.models.back().spec.label();
          row.entries = report.entries;
          result.model_rows.push_back(std::move(row));
          pair.reports.push_back(std::move(report));
        }
        fitted = true;
      } catch (const FitFailed&) {
        fitted = false;
      }
    }

    if (fitted) {
      for (int m = 0; m < problem.n_obj(); ++m)
        log.model_label[m] = pair.models[static_cast<std::size_t>(m)].spec.label();

      std::vector<Individual> candidates =
          surrogate_optimize(result.archive, pair, problem, cfg.k_surrogate_gens, cfg, cycle,
                             threads);
      candidates = eliminate_duplicates(result.archive.decision_vectors(), std::move(candidates));

      Rng roulette(mix({cfg.seed, streams::kRoulette, static_cast<std::uint64_t>(cycle)}));
      infills = select_infill(candidates, n_pick, roulette);
    } else {
      // fall back to one generation of direct NSGA-II-WR style variation over
      // the archive itself (every member carries exact objectives)
      log.fallback = true;
      std::vector<Individual> pop;
      for (const ArchiveEntry& e : result.archive.entries()) pop.push_back(e.ind);
      if (static_cast<int>(pop.size()) > cfg.population) pop = survival(std::move(pop), cfg.population);
      rank_and_crowd(pop);
      Rng var_rng(mix({cfg.seed, streams::kVariation, static_cast<std::uint64_t>(cycle)}));
      std::vector<DecisionVector> raw;
      while (static_cast<int>(raw.size()) < n_pick) {
        const Individual& p1 = tournament_select(pop, var_rng);
        const Individual& p2 = tournament_select(pop, var_rng);
        auto [c1, c2] = sbx_crossover(p1.x, p2.x, problem.bounds(), cfg.variation, var_rng);
        raw.push_back(polynomial_mutation(c1, problem.bounds(), cfg.variation, var_rng));
        if (static_cast<int>(raw.size()) < n_pick)
          raw.push_back(polynomial_mutation(c2, problem.bounds(), cfg.variation, var_rng));
      }
      std::vector<RepairResult> repaired =
          repair_batch(raw, problem, cfg.repair, cfg.seed,
                       mix({streams::kVariation, static_cast<std::uint64_t>(cycle)}), threads);
      std::vector<Individual> children;
      for (auto& r : repaired)
        if (r.ok()) children.push_back(make_individual(problem, std::move(r.x)));
      children = eliminate_duplicates(result.archive.decision_vectors(), std::move(children));
      infills = std::move(children);
      if (static_cast<int>(infills.size()) > n_pick) infills.resize(n_pick);
    }

    // duplicate stall: guarantee budget progress with fresh feasible designs
    if (static_cast<int>(infills.size()) < n_pick) {
      log.stalled = infills.empty();
      Rng stall_rng(mix({cfg.seed, streams::kStall, static_cast<std::uint64_t>(cycle)}));
      int guard = 0;
      while (static_cast<int>(infills.size()) < n_pick && guard++ < 200) {
        Individual fresh =
            make_individual(problem, random_feasible_design(problem, cfg.repair, stall_rng));
        if (result.archive.contains(fresh.x)) continue;
        bool dup = false;
        for (const Individual& inf : infills)
          if (grid::key(inf.x) == grid::key(fresh.x)) dup = true;
        if (!dup) infills.push_back(std::move(fresh));
      }
    }
    if (infills.empty()) break;  // cannot make progress; archive stays short (logged)

    // exact evaluation of the cycle's infills
    std::vector<ObjectiveVector> predicted;
    predicted.reserve(infills.size());
    for (Individual& ind : infills) {
      predicted.push_back(ind.f);  // may be empty on fallback/stall paths
      ind.f.clear();
    }
    parallel_for(
        infills.size(),
        [&](std::size_t i) {
          infills[i].f = evaluate_exact(problem, infills[i].x, budget);
          infills[i].source = EvalSource::Exact;
        },
        threads);

    int mse_count = 0;
    for (std::size_t i = 0; i < infills.size(); ++i) {
      if (predicted[i].empty()) continue;
      for (int m = 0; m < problem.n_obj(); ++m) {
        const double e = predicted[i][static_cast<std::size_t>(m)] -
                         infills[i].f[static_cast<std::size_t>(m)];
        log.infill_mse[m] += e * e;
      }
      ++mse_count;
    }
    if (mse_count > 0)
      for (int m = 0; m < problem.n_obj(); ++m) log.infill_mse[m] /= mse_count;

    log.infill_count = static_cast<int>(infills.size());
    for (Individual& ind : infills) result.archive.add(cycle, std::move(ind));
    result.cycles.push_back(log);
  }

  return result;
}

}  // namespace emopt
