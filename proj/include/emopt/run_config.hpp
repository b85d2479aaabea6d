// All algorithm hyperparameters for a single optimization run.

#pragma once

#include <cstdint>
#include <stdexcept>

#include "emopt/repair.hpp"

namespace emopt {

struct VariationConfig {
  double crossover_prob = 0.9;
  double eta_c = 15.0;
  double eta_m = 20.0;
  double mutation_prob = -1.0;  // < 0 means 1/N

  double resolved_mutation_prob(int dim) const {
    return mutation_prob >= 0.0 ? mutation_prob : 1.0 / dim;
  }

  void validate() const {
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
      throw std::invalid_argument("variation: crossover probability outside [0,1]");
    if (eta_c <= 0.0 || eta_m <= 0.0)
      throw std::invalid_argument("variation: distribution indices must be positive");
  }
};

struct RunConfig {
  long long ese_max = 1500;
  int population = 100;
  int offspring = 20;
  int n_doe = 60;        // initial design of experiments (surrogate mode)
  int n_infill = 10;     // exact evaluations per surrogate cycle
  int k_surrogate_gens = 35;
  VariationConfig variation;
  RepairConfig repair;
  std::uint64_t seed = 1;

  void validate() const {
    if (ese_max < 1) throw std::invalid_argument("config: ese_max must be >= 1");
    if (population < 2) throw std::invalid_argument("config: population must be >= 2");
    if (offspring < 1) throw std::invalid_argument("config: offspring must be >= 1");
    if (n_infill < 1 || n_infill > population)
      throw std::invalid_argument("config: n_infill must be in [1, population]");
    if (n_doe < 1 || n_doe > ese_max)
      throw std::invalid_argument("config: n_doe must be in [1, ese_max]");
    if (k_surrogate_gens < 0) throw std::invalid_argument("config: k must be >= 0");
    variation.validate();
    repair.validate();
  }
};

}  // namespace emopt
