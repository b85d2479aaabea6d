// Serial-vs-parallel throughput of the batch kernels. The serial path is the
// reference implementation the equality tests pin the OpenMP kernels against;
// this target reports the speedup actually obtained on this machine.

#include <chrono>
#include <cstdio>
#include <vector>

#include "emopt/ipm.hpp"
#include "emopt/metrics.hpp"
#include "emopt/parallel.hpp"
#include "emopt/repair.hpp"
#include "emopt/sampling.hpp"
#include "emopt/surrogate.hpp"

using namespace emopt;

namespace {

template <typename F>
double seconds(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, int threads) {
  std::printf("%-28s serial %8.3fs   %2d threads %8.3fs   speedup %5.2fx\n", name, serial,
              threads, parallel, serial / parallel);
}

}  // namespace

int main() {
  ipm::IpmProxyProblem problem;
  const int threads = hardware_threads();
  std::printf("batch kernels, %d hardware threads\n\n", threads);

  // constraint evaluation over a large LHS batch
  {
    const auto batch = lhs(200000, problem.bounds(), 1, LhsSnap::None);
    std::vector<double> cv(batch.size());
    auto kernel = [&](int t) {
      parallel_for(
          batch.size(), [&](std::size_t i) { cv[i] = problem.constraints(batch[i]).cv; }, t);
    };
    const double s = seconds([&] { kernel(1); });
    const double p = seconds([&] { kernel(threads); });
    report("constraint evaluation", s, p, threads);
  }

  // two-phase repair of an infeasible batch
  {
    std::vector<DecisionVector> infeasible;
    for (std::uint64_t round = 0; infeasible.size() < 2000; ++round) {
      for (auto& x : lhs(1000, problem.bounds(), mix({3, round}), LhsSnap::None))
        if (!problem.constraints(x).feasible() && infeasible.size() < 2000)
          infeasible.push_back(std::move(x));
    }
    RepairConfig cfg;
    const double s =
        seconds([&] { (void)repair_batch(infeasible, problem, cfg, 7, 0, 1); });
    const double p =
        seconds([&] { (void)repair_batch(infeasible, problem, cfg, 7, 0, threads); });
    report("batch repair", s, p, threads);
  }

  // feasibility study (LHS + constraint statistics)
  {
    const double s = seconds([&] { (void)feasibility_study(problem, 200, 100, 5, 1); });
    const double p = seconds([&] { (void)feasibility_study(problem, 200, 100, 5, threads); });
    report("feasibility study", s, p, threads);
  }

  // surrogate model selection (22 candidate fits)
  {
    Rng rng(11);
    std::vector<DecisionVector> X;
    std::vector<double> y;
    for (int i = 0; i < 120; ++i) {
      DecisionVector x(10);
      for (auto& v : x) v = rng.uniform();
      y.push_back(x[0] * x[1] + std::sin(3.0 * x[2]));
      X.push_back(std::move(x));
    }
    const double s = seconds([&] { (void)select_model(X, y, candidate_specs(), 1, nullptr, 1); });
    const double p =
        seconds([&] { (void)select_model(X, y, candidate_specs(), 1, nullptr, threads); });
    report("surrogate model selection", s, p, threads);
  }

  return 0;
}
