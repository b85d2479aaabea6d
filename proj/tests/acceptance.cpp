// Acceptance suite: every criterion prints one PASS/FAIL line with its
// measured values and runtime. The process exits with the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "emopt/artifacts.hpp"
#include "emopt/ipm.hpp"
#include "emopt/metrics.hpp"
#include "emopt/nsga2.hpp"
#include "emopt/parallel.hpp"
#include "emopt/repair.hpp"
#include "emopt/saloop.hpp"
#include "emopt/sampling.hpp"
#include "oracles.hpp"

using namespace emopt;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, const std::string& title) : id_(id), title_(title) {
    start_ = std::chrono::steady_clock::now();
  }

  void check(bool ok, const std::string& detail) {
    if (!ok) {
      ok_ = false;
      failures_.push_back(detail);
    }
    details_.push_back((ok ? "" : "FAILED: ") + detail);
  }

  ~Criterion() {
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("CRITERION %2d: %s  [%.1fs]  %s\n", id_, ok_ ? "PASS" : "FAIL", sec,
                title_.c_str());
    for (const auto& d : details_) std::printf("              - %s\n", d.c_str());
    if (!ok_) ++g_failures;
    std::fflush(stdout);
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> details_;
  std::vector<std::string> failures_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::vector<DecisionVector> infeasible_lhs(const Problem& p, int count, std::uint64_t seed) {
  std::vector<DecisionVector> out;
  for (std::uint64_t round = 0; static_cast<int>(out.size()) < count; ++round) {
    for (auto& x : lhs(1000, p.bounds(), mix({seed, round}), LhsSnap::None)) {
      if (static_cast<int>(out.size()) >= count) break;
      if (!p.constraints(x).feasible()) out.push_back(std::move(x));
    }
  }
  return out;
}

std::vector<ObjectiveVector> nondominated(std::vector<ObjectiveVector> points) {
  std::vector<ObjectiveVector> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dom = false;
    for (std::size_t j = 0; j < points.size() && !dom; ++j) {
      if (i == j) continue;
      if (dominates(points[j], points[i])) dom = true;
      if (j < i && points[j] == points[i]) dom = true;
    }
    if (!dom) front.push_back(points[i]);
  }
  return front;
}

std::vector<ObjectiveVector> feasible_front(const std::vector<ArchiveEntry>& archive) {
  std::vector<ObjectiveVector> objs;
  for (const auto& e : archive)
    if (e.ind.feasible()) objs.push_back(e.ind.f);
  return nondominated(std::move(objs));
}

void criterion_1_feasibility_rate() {
  Criterion c(1, "LHS feasibility rate matches the published 30.3%");
  ipm::IpmProxyProblem problem;
  const FeasibilityStats stats = feasibility_study(problem, 100, 100, 2024);
  const double pct = 100.0 * stats.feasible_fraction;
  c.check(std::abs(pct - 30.3) <= 2.0,
          "mean feasible fraction " + fmt(pct) + "% (target 30.3% +/- 2pp)");
}

void criterion_2_per_constraint() {
  Criterion c(2, "per-constraint violation rates and ranks match the published table");
  ipm::IpmProxyProblem problem;
  const FeasibilityStats stats = feasibility_study(problem, 100, 100, 2024);
  const double expected[10] = {0.0, 31.43, 19.16, 19.16, 21.94, 19.59, 36.28, 0.0, 0.0, 20.25};
  for (int j = 0; j < 10; ++j) {
    const double pct = 100.0 * stats.violation_fraction[j];
    c.check(std::abs(pct - expected[j]) <= 2.0,
            "g" + std::to_string(j + 1) + " violated " + fmt(pct) + "% (published " +
                fmt(expected[j]) + "%)");
  }
  c.check(stats.violation_fraction[0] == 0.0 && stats.violation_fraction[7] == 0.0 &&
              stats.violation_fraction[8] == 0.0,
          "g1, g8, g9 never violated");
  const auto& v = stats.violation_fraction;
  const bool order = v[6] > v[1] && v[1] > v[4] && v[4] > v[9] && v[9] > v[5] &&
                     v[5] > std::max(v[2], v[3]) && std::abs(v[2] - v[3]) <= 0.02 &&
                     std::min(v[2], v[3]) > 0.0;
  c.check(order, "violation rank order g7 > g2 > g5 > g10 > g6 > g3~g4 > zeros");
}

void criterion_3_reference_design() {
  Criterion c(3, "the reference design satisfies all ten constraints");
  const ConstraintReport r = ipm::ipm_constraints(ipm::reference_design());
  c.check(r.feasible(), "library evaluation feasible (max g = " +
                            fmt(*std::max_element(r.g.begin(), r.g.end())) + ")");
  const std::vector<double> direct = oracle::ipm_constraints_direct(ipm::reference_design());
  bool agree = true;
  for (int j = 0; j < 10; ++j) {
    if (direct[j] > 0.0) agree = false;
    if (std::abs(direct[j] - r.g[j]) > 1e-9) agree = false;
  }
  c.check(agree, "independent direct-substitution oracle agrees within 1e-9");
}

void criterion_4_repair_soundness() {
  Criterion c(4, "repair fixes >= 99% of infeasible samples, exactly and on-grid");
  ipm::IpmProxyProblem problem;
  RepairConfig cfg;
  const auto batch = infeasible_lhs(problem, 1000, 515);
  const auto results = repair_batch(batch, problem, cfg, 2024, 1);

  int repaired = 0;
  bool contracts = true, idempotent = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) continue;
    ++repaired;
    const DecisionVector& y = results[i].x;
    if (!problem.constraints(y).feasible() || !grid::on_grid(y) ||
        !problem.bounds().contains(y, 1e-12))
      contracts = false;
    Rng rng(mix({99, i}));
    const RepairResult again = repair(y, problem, cfg, rng);
    if (again.status != RepairStatus::Unchanged || again.x != y) idempotent = false;
  }
  c.check(repaired >= 990, std::to_string(repaired) + "/1000 repaired (>= 990 required)");
  c.check(contracts, "every repaired output feasible, on the 0.01 grid, within bounds");
  c.check(idempotent, "repair is idempotent on its own outputs");
}

void criterion_5_precision_coverage() {
  Criterion c(5, "precision repair covers the exhaustive corner oracle");
  ipm::IpmProxyProblem problem;
  RepairConfig cfg;
  const auto batch = infeasible_lhs(problem, 500, 616);

  int oracle_yes = 0, heuristic_yes = 0;
  bool sound = true, clean = true;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const RepairResult phase1 = repair_feasibility(batch[i], problem, cfg);
    if (!phase1.ok()) continue;
    Rng rng(mix({2024, i}));
    const RepairResult phase2 = repair_precision(phase1.x, problem, cfg, rng);
    if (phase2.ok() &&
        (!grid::on_grid(phase2.x) || !problem.constraints(phase2.x).feasible()))
      clean = false;
    const bool corner = oracle::corner_search(phase1.x, problem).has_value();
    if (corner) {
      ++oracle_yes;
      if (phase2.ok()) ++heuristic_yes;
    } else if (phase2.ok()) {
      sound = false;
    }
  }
  c.check(oracle_yes > 0 && heuristic_yes >= static_cast<int>(0.95 * oracle_yes),
          std::to_string(heuristic_yes) + "/" + std::to_string(oracle_yes) +
              " oracle-roundable points rounded within rho = 100 permutations (>= 95%)");
  c.check(sound, "no success where the corner oracle finds nothing");
  c.check(clean, "never returns an infeasible or off-grid vector");
}

void criterion_6_sort_oracle() {
  Criterion c(6, "non-dominated sort matches the brute-force oracle on 500 populations");
  Rng rng(31415);
  bool all = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform_int(26));
    std::vector<Individual> pop;
    std::vector<ObjectiveVector> objs;
    std::vector<double> cv;
    std::vector<bool> feas;
    for (int i = 0; i < n; ++i) {
      Individual ind;
      ind.x = {0.0};
      ind.f = {std::floor(rng.uniform() * 5.0), std::floor(rng.uniform() * 5.0)};
      const double viol =
          (trial % 2 == 1 && rng.uniform() < 0.4) ? 1.0 + std::floor(rng.uniform() * 3.0) : 0.0;
      ind.con = ConstraintReport::from_values({viol});
      objs.push_back(ind.f);
      cv.push_back(ind.con.cv);
      feas.push_back(ind.feasible());
      pop.push_back(std::move(ind));
    }
    const auto expect = oracle::brute_sort(objs, cv, feas);
    const auto got = non_dominated_sort(pop);
    if (got.size() != expect.size()) {
      all = false;
      continue;
    }
    for (std::size_t k = 0; k < got.size(); ++k) {
      std::set<int> a(got[k].begin(), got[k].end()), b(expect[k].begin(), expect[k].end());
      if (a != b) all = false;
    }
  }
  c.check(all, "front assignments identical on sizes 5-30, with and without infeasibles");
}

void criterion_7_hypervolume() {
  Criterion c(7, "exact hypervolume agrees with Monte Carlo");
  const HvReference unit{{0.0, 0.0}, {1.0, 1.0}};
  const std::vector<ObjectiveVector> hand = {{0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}};
  const double hv_hand = hypervolume2d(hand, unit);
  c.check(std::abs(hv_hand - 0.37) <= 3e-3, "hand front sweep = " + fmt(hv_hand) + " (0.37)");
  const double mc_hand = oracle::mc_hypervolume(hand, {0, 0}, {1, 1}, 1000000, 7);
  c.check(std::abs(hv_hand - mc_hand) <= 3e-3, "hand front MC = " + fmt(mc_hand));

  Rng rng(606);
  double worst_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(15));
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
      xs.push_back(rng.uniform());
      ys.push_back(rng.uniform());
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    std::vector<ObjectiveVector> front;
    for (int i = 0; i < n; ++i) front.push_back({xs[i], ys[i]});
    const double exact = hypervolume2d(front, unit);
    const double mc = oracle::mc_hypervolume(front, {0, 0}, {1, 1}, 1000000, 9000 + trial);
    worst_gap = std::max(worst_gap, std::abs(exact - mc));
  }
  c.check(worst_gap <= 3e-3,
          "worst |sweep - MC| over 50 random fronts = " + fmt(worst_gap) + " (<= 3e-3)");
}

void criterion_8_surrogate_interpolation() {
  Criterion c(8, "surrogates interpolate their training data across every spec");
  Rng rng(808);
  double worst_rbf = 0.0, worst_kriging = 0.0;
  for (int dataset = 0; dataset < 20; ++dataset) {
    const int n = 12 + static_cast<int>(rng.uniform_int(14));
    const int d = 2 + static_cast<int>(rng.uniform_int(4));
    std::vector<DecisionVector> X(n, DecisionVector(d));
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) X[i][j] = rng.uniform();
      y[i] = std::sin(3.0 * X[i][0]) + X[i][d - 1] * X[i][d - 1] + 0.5 * X[i][0] * X[i][d - 1];
    }
    for (const ModelSpec& spec : candidate_specs()) {
      try {
        const FittedModel m = fit_model(X, y, spec);
        for (int i = 0; i < n; ++i) {
          const double r = std::abs(predict(m, X[i]) - y[i]);
          if (spec.family == ModelFamily::Rbf)
            worst_rbf = std::max(worst_rbf, r);
          else
            worst_kriging = std::max(worst_kriging, r);
        }
      } catch (const FitFailed&) {
        // a singular random draw is allowed to fail; interpolation quality is
        // asserted on everything that fits
      }
    }
  }
  c.check(worst_rbf <= 1e-8, "worst RBF training residual = " + fmt(worst_rbf) + " (<= 1e-8)");
  c.check(worst_kriging <= 1e-6,
          "worst Kriging training residual = " + fmt(worst_kriging) + " (<= 1e-6)");
}

void criterion_9_repair_benefit() {
  Criterion c(9, "repair lifts the combined-front hypervolume and keeps every eval feasible");
  ipm::IpmProxyProblem problem;
  RunConfig cfg;
  cfg.ese_max = 1500;
  cfg.population = 100;
  cfg.offspring = 20;

  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  long long feasible_wr = 0, feasible_plain = 0;
  std::vector<ObjectiveVector> front_wr, front_plain;

  struct Job {
    OptMode mode;
    std::uint64_t seed;
    std::vector<ArchiveEntry> archive;
  };
  std::vector<Job> jobs;
  for (auto s : seeds) jobs.push_back({OptMode::WithRepair, s, {}});
  for (auto s : seeds) jobs.push_back({OptMode::Plain, s, {}});
  parallel_for(jobs.size(), [&](std::size_t i) {
    RunConfig local = cfg;
    local.seed = jobs[i].seed;
    EvaluationBudget budget(local.ese_max);
    jobs[i].archive = nsga2_run(problem, local, jobs[i].mode, budget, {}, 1).archive;
  });

  for (const Job& job : jobs) {
    long long feas = 0;
    std::vector<ObjectiveVector> objs;
    for (const auto& e : job.archive)
      if (e.ind.feasible()) {
        ++feas;
        objs.push_back(e.ind.f);
      }
    auto& front = job.mode == OptMode::WithRepair ? front_wr : front_plain;
    auto& count = job.mode == OptMode::WithRepair ? feasible_wr : feasible_plain;
    count += feas;
    for (auto& f : nondominated(std::move(objs))) front.push_back(std::move(f));
  }
  front_wr = nondominated(std::move(front_wr));
  front_plain = nondominated(std::move(front_plain));

  const HvReference ref = combined_reference({front_wr, front_plain});
  const double hv_wr = hypervolume2d(front_wr, ref);
  const double hv_plain = hypervolume2d(front_plain, ref);
  c.check(hv_wr >= hv_plain, "combined-front HV with repair " + fmt(hv_wr) +
                                 " >= plain " + fmt(hv_plain));
  c.check(feasible_wr == 7500,
          "with repair all " + std::to_string(feasible_wr) + "/7500 evaluations feasible");
  c.check(feasible_plain < 7500,
          "plain run wastes evaluations on infeasible designs (" +
              std::to_string(feasible_plain) + "/7500 feasible)");
}

void criterion_10_surrogate_benefit() {
  Criterion c(10, "surrogate assistance dominates plain repair at a 200-evaluation budget");
  ipm::IpmProxyProblem problem;
  const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

  RunConfig cfg;
  cfg.ese_max = 200;
  cfg.population = 100;
  cfg.offspring = 20;
  cfg.n_doe = 60;
  cfg.n_infill = 10;
  cfg.k_surrogate_gens = 35;

  struct Result {
    std::vector<ArchiveEntry> archive;
  };
  std::vector<Result> sa(seeds.size()), wr(seeds.size());
  parallel_for(seeds.size() * 2, [&](std::size_t i) {
    RunConfig local = cfg;
    local.seed = seeds[i % seeds.size()];
    if (i < seeds.size()) {
      sa[i].archive = run_sa(problem, local, 1).archive.entries();
    } else {
      EvaluationBudget budget(local.ese_max);
      wr[i - seeds.size()].archive =
          nsga2_run(problem, local, OptMode::WithRepair, budget, {}, 1).archive;
    }
  });

  // shared normalization box over every front from both methods
  std::vector<std::vector<ObjectiveVector>> everything;
  for (const auto& r : sa) everything.push_back(feasible_front(r.archive));
  for (const auto& r : wr) everything.push_back(feasible_front(r.archive));
  const HvReference ref = combined_reference(everything);

  auto median_hv = [&](const std::vector<Result>& runs) {
    std::vector<double> hv;
    for (const auto& r : runs) hv.push_back(hypervolume2d(feasible_front(r.archive), ref));
    std::sort(hv.begin(), hv.end());
    return hv[hv.size() / 2];
  };
  const double hv_sa = median_hv(sa), hv_wr = median_hv(wr);
  c.check(hv_sa >= hv_wr, "median final HV: surrogate-assisted " + fmt(hv_sa) +
                              " >= repair-only " + fmt(hv_wr));

  bool monotone = true;
  for (const auto& r : sa) {
    const auto trace = rhve(r.archive, ref, 10);
    for (std::size_t i = 1; i < trace.size(); ++i)
      if (trace[i].second < trace[i - 1].second) monotone = false;
  }
  c.check(monotone, "per-run hypervolume trace non-decreasing in evaluations");
}

void criterion_11_tradeoff() {
  Criterion c(11, "trade-off selector reproduces the hand-computed values");
  const auto ranking = tradeoff({{0, 10}, {1, 5}, {3, 4}});
  c.check(ranking.size() == 3 && ranking[0].index == 1 &&
              std::abs(ranking[0].value - 5.0) <= 1e-12,
          "middle point of {(0,10),(1,5),(3,4)} scores " + fmt(ranking[0].value) + " (5.0)");
  const double direct = oracle::tradeoff_direct({{0, 10}, {1, 5}, {3, 4}}, 1);
  c.check(std::abs(direct - 5.0) <= 1e-12, "independent evaluation agrees");

  const auto sym = tradeoff({{0, 1}, {1, 0}});
  c.check(sym.size() == 2 && std::abs(sym[0].value - 1.0) <= 1e-12 &&
              std::abs(sym[1].value - 1.0) <= 1e-12,
          "symmetric two-point front scores 1.0 for both members");
}

void criterion_12_determinism() {
  Criterion c(12, "reruns from the embedded config are byte-identical across thread counts");
  const fs::path dir = fs::temp_directory_path() / "emopt-acceptance" / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "[run]\nproblem = ipm-proxy-v1\nmode = wr-sa\nseeds = 5\nese_max = 45\n"
           "population = 25\noffspring = 8\nn_doe = 25\nn_infill = 5\nk = 3\n";
  }
  auto shell = [&](const std::string& args) {
    const std::string cmd = std::string(EMOPT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const int r1 =
      shell("--threads 1 run --config " + (dir / "run.cfg").string() + " --out-dir " +
            (dir / "a").string());
  const int r2 = shell("--threads 8 run --config " + (dir / "a/config.resolved.cfg").string() +
                       " --out-dir " + (dir / "b").string());
  c.check(r1 == 0 && r2 == 0, "both runs exit 0");
  const std::string a = slurp(dir / "a/seed_5/archive.csv");
  const std::string b = slurp(dir / "b/seed_5/archive.csv");
  c.check(!a.empty() && a == b, "archive CSVs byte-identical (threads 1 vs 8, rerun from config)");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");
  criterion_1_feasibility_rate();
  criterion_2_per_constraint();
  criterion_3_reference_design();
  criterion_4_repair_soundness();
  criterion_5_precision_coverage();
  criterion_6_sort_oracle();
  criterion_7_hypervolume();
  criterion_8_surrogate_interpolation();
  criterion_9_repair_benefit();
  criterion_10_surrogate_benefit();
  criterion_11_tradeoff();
  criterion_12_determinism();
  std::printf("================\n%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures;
}
