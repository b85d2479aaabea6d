// Per-objective metamodels: RBF interpolants and ordinary Kriging, fitted per
// the M1 scheme (one independent model per objective), with validation-based
// selection over a fixed grid of normalization / kernel / tail variants.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "emopt/common.hpp"

namespace emopt {

enum class ModelFamily { Rbf, Kriging };
enum class RbfKernel { Gaussian, Multiquadric, InverseMultiquadric, Cubic, ThinPlate };
enum class KrigingKernel { Gaussian, Exponential };
enum class InputNorm { None, UnitCube };
enum class OutputNorm { None, Standardize };
enum class RbfTail { None, Constant, Linear };

struct ModelSpec {
  ModelFamily family = ModelFamily::Rbf;
  RbfKernel rbf_kernel = RbfKernel::Gaussian;
  KrigingKernel kriging_kernel = KrigingKernel::Gaussian;
  InputNorm input_norm = InputNorm::None;
  OutputNorm output_norm = OutputNorm::None;
  RbfTail tail = RbfTail::None;

  std::string label() const;
};

// The default candidate grid iterated during model selection: every RBF
// kernel/tail pairing that yields a solvable interpolation system (kernels
// that are only conditionally positive definite require a polynomial tail of
// matching order), under both normalization schemes, plus ordinary Kriging
// with gaussian and exponential correlation. 22 specs total.
const std::vector<ModelSpec>& candidate_specs();

struct FittedModel {
  ModelSpec spec;

  // input/output transforms (identity when the spec disables them)
  std::vector<double> in_shift, in_scale;
  double out_shift = 0.0, out_scale = 1.0;

  Eigen::MatrixXd centers;  // normalized training inputs, one row per point
  Eigen::VectorXd weights;  // rbf weights / kriging correlation coefficients
  Eigen::VectorXd tail_coeffs;
  double shape = 1.0;  // rbf shape parameter (median-distance heuristic)

  std::vector<double> length_scales;  // kriging, per input dimension
  double mean = 0.0;                  // kriging constant mean
  double process_variance = 0.0;
  double nugget = 0.0;

  double validation_mse = std::numeric_limits<double>::quiet_NaN();
};

// Exact interpolation fit; throws FitFailed when the system stays singular
// after ridge retries (1e-10 then 1e-8). Needs >= 2 distinct rows.
FittedModel fit_rbf(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                    const ModelSpec& spec);

// Ordinary Kriging with anisotropic length scales fitted by maximizing the
// concentrated log-likelihood (multi-start simplex search). Needs >= 3 rows.
// Ill-conditioned correlation matrices escalate the nugget up to 1e-4 before
// the fit fails.
FittedModel fit_kriging(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                        const ModelSpec& spec);

FittedModel fit_model(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                      const ModelSpec& spec);

double predict(const FittedModel& model, const DecisionVector& x);

struct SelectionEntry {
  ModelSpec spec;
  double mse = std::numeric_limits<double>::infinity();
  bool failed = false;
};

struct SelectionReport {
  std::vector<SelectionEntry> entries;
  int winner = -1;
};

// Single seeded 80/20 split; every candidate is fitted on the training part
// and scored by validation MSE; the winner (ties: first in declared order) is
// refitted on all data. Needs >= 10 rows.
FittedModel select_model(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                         const std::vector<ModelSpec>& specs, std::uint64_t seed,
                         SelectionReport* report = nullptr, int threads = 0);

// One fitted model per objective, trained on the identical input set.
struct SurrogatePair {
  std::vector<FittedModel> models;
  std::vector<SelectionReport> reports;
};

}  // namespace emopt
