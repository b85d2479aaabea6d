#include <doctest.h>

#include <atomic>
#include <thread>

#include "emopt/ipm.hpp"
#include "emopt/problem.hpp"
#include "emopt/rng.hpp"

using namespace emopt;

TEST_CASE("dominance basics") {
  CHECK(is_dominated({1, 1}, {0, 0}));
  CHECK_FALSE(is_dominated({0, 1}, {1, 0}));
  CHECK_FALSE(is_dominated({1, 0}, {0, 1}));
  CHECK_FALSE(is_dominated({2, 2}, {2, 2}));  // equality never dominates
  CHECK_THROWS_AS((void)dominates({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("dominance is a strict partial order") {
  Rng rng(11);
  std::vector<ObjectiveVector> vs;
  for (int i = 0; i < 60; ++i) {
    // coarse values to make ties and comparable pairs common
    vs.push_back({std::floor(rng.uniform() * 4), std::floor(rng.uniform() * 4),
                  std::floor(rng.uniform() * 4)});
  }
  for (const auto& a : vs) CHECK_FALSE(dominates(a, a));  // irreflexive
  for (const auto& a : vs)
    for (const auto& b : vs)
      if (dominates(a, b)) CHECK_FALSE(dominates(b, a));  // asymmetric
  for (const auto& a : vs)
    for (const auto& b : vs)
      for (const auto& c : vs)
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));  // transitive
}

TEST_CASE("orientation round-trip is the identity") {
  ipm::IpmProxyProblem p;
  const ObjectiveVector raw{33.5, 21.0};
  CHECK(to_raw_form(p, to_min_form(p, raw)) == raw);
  // the maximized objective is stored negated
  const ObjectiveVector f = to_min_form(p, raw);
  CHECK(f[0] == -33.5);
  CHECK(f[1] == 21.0);
}

TEST_CASE("budget counting and exhaustion") {
  ipm::IpmProxyProblem p;
  EvaluationBudget budget(3);
  const DecisionVector& x = ipm::reference_design();

  const ObjectiveVector a = evaluate_exact(p, x, budget);
  const ObjectiveVector b = evaluate_exact(p, x, budget);
  CHECK(a == b);  // analytic proxy is pure: bit-identical re-evaluation
  CHECK(budget.used() == 2);

  (void)evaluate_exact(p, x, budget);
  CHECK(budget.used() == 3);
  CHECK_THROWS_AS((void)evaluate_exact(p, x, budget), BudgetExhausted);
  CHECK(budget.used() == 3);  // failed call does not count
}

TEST_CASE("constraint evaluation consumes no budget and validates dimension") {
  ipm::IpmProxyProblem p;
  EvaluationBudget budget(1);
  (void)evaluate_constraints(p, ipm::reference_design());
  CHECK(budget.used() == 0);
  CHECK_THROWS_AS((void)evaluate_constraints(p, DecisionVector{1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)evaluate_exact(p, DecisionVector{1.0}, budget), std::invalid_argument);
}

TEST_CASE("budget charge is atomic under concurrent evaluations") {
  EvaluationBudget budget(1000);
  std::atomic<int> denied{0};
  std::vector<std::thread> workers;
  for (int t = 0; t < 8; ++t) {
    workers.emplace_back([&budget, &denied] {
      for (int i = 0; i < 200; ++i) {
        try {
          budget.charge();
        } catch (const BudgetExhausted&) {
          ++denied;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  CHECK(budget.used() == 1000);
  CHECK(denied.load() == 600);
}

TEST_CASE("constraint report bookkeeping") {
  const ConstraintReport ok = ConstraintReport::from_values({-1.0, -0.5});
  CHECK(ok.feasible());
  CHECK(ok.cv == 0.0);
  const ConstraintReport bad = ConstraintReport::from_values({-1.0, 2.0, 3.0});
  CHECK_FALSE(bad.feasible());
  CHECK(bad.cv == doctest::Approx(5.0));
  const ConstraintReport degen = ConstraintReport::from_values({-1.0, -1.0}, true);
  CHECK_FALSE(degen.feasible());
}

TEST_CASE("bounds validation") {
  BoundsSpec ok{{0.0, 1.0}, {1.0, 2.0}};
  ok.validate();
  CHECK(ok.contains({0.5, 1.5}));
  CHECK_FALSE(ok.contains({-0.1, 1.5}));
  BoundsSpec bad{{0.0, 2.0}, {1.0, 2.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("two-decimal grid helpers") {
  CHECK(grid::snap(7.654) == doctest::Approx(7.65).epsilon(1e-15));
  CHECK(grid::snap(7.656) == doctest::Approx(7.66).epsilon(1e-15));
  CHECK(grid::floor_to(7.656) == doctest::Approx(7.65).epsilon(1e-15));
  CHECK(grid::ceil_to(7.651) == doctest::Approx(7.66).epsilon(1e-15));
  // values already on the grid map to themselves under floor and ceil
  for (double v : {7.65, -2.13, 0.0, 174.42}) {
    CHECK(grid::floor_to(v) == doctest::Approx(v).epsilon(1e-15));
    CHECK(grid::ceil_to(v) == doctest::Approx(v).epsilon(1e-15));
    CHECK(grid::on_grid(v));
  }
  CHECK_FALSE(grid::on_grid(7.655));
  CHECK(grid::key({1.23, 4.56}) == std::vector<long long>{123, 456});
}
