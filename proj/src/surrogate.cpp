#include "emopt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "emopt/nelder_mead.hpp"
#include "emopt/parallel.hpp"
#include "emopt/rng.hpp"

namespace emopt {

namespace {

const char* rbf_kernel_name(RbfKernel k) {
  switch (k) {
    case RbfKernel::Gaussian: return "gaussian";
    case RbfKernel::Multiquadric: return "multiquadric";
    case RbfKernel::InverseMultiquadric: return "inv-multiquadric";
    case RbfKernel::Cubic: return "cubic";
    case RbfKernel::ThinPlate: return "thin-plate";
  }
  return "?";
}

const char* tail_name(RbfTail t) {
  switch (t) {
    case RbfTail::None: return "none";
    case RbfTail::Constant: return "const";
    case RbfTail::Linear: return "linear";
  }
  return "?";
}

double rbf_phi(RbfKernel kernel, double r, double shape) {
  const double s = r / shape;
  switch (kernel) {
    case RbfKernel::Gaussian: return std::exp(-s * s);
    case RbfKernel::Multiquadric: return std::sqrt(1.0 + s * s);
    case RbfKernel::InverseMultiquadric: return 1.0 / std::sqrt(1.0 + s * s);
    case RbfKernel::Cubic: return r * r * r;
    case RbfKernel::ThinPlate: return r > 0.0 ? r * r * std::log(r) : 0.0;
  }
  return 0.0;
}

struct Normalizer {
  std::vector<double> shift, scale;

  static Normalizer fit(const std::vector<DecisionVector>& X, InputNorm mode) {
    const std::size_t d = X[0].size();
    Normalizer n;
    n.shift.assign(d, 0.0);
    n.scale.assign(d, 1.0);
    if (mode == InputNorm::UnitCube) {
      for (std::size_t j = 0; j < d; ++j) {
        double lo = X[0][j], hi = X[0][j];
        for (const auto& row : X) {
          lo = std::min(lo, row[j]);
          hi = std::max(hi, row[j]);
        }
        n.shift[j] = lo;
        n.scale[j] = (hi - lo) > 0.0 ? (hi - lo) : 1.0;
      }
    }
    return n;
  }
};

Eigen::MatrixXd normalized_inputs(const std::vector<DecisionVector>& X, const Normalizer& n) {
  Eigen::MatrixXd M(X.size(), X[0].size());
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = 0; j < X[0].size(); ++j)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (X[i][j] - n.shift[j]) / n.scale[j];
  return M;
}

void fit_output_transform(const std::vector<double>& y, OutputNorm mode, double& shift,
                          double& scale) {
  shift = 0.0;
  scale = 1.0;
  if (mode != OutputNorm::Standardize) return;
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(y.size());
  shift = mean;
  scale = var > 0.0 ? std::sqrt(var) : 1.0;
}

double median_pairwise_distance(const Eigen::MatrixXd& X) {
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(X.rows()) * (X.rows() - 1) / 2);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = i + 1; j < X.rows(); ++j)
      d.push_back((X.row(i) - X.row(j)).norm());
  if (d.empty()) return 1.0;
  std::sort(d.begin(), d.end());
  const std::size_t m = d.size();
  double med = (m % 2 == 1) ? d[m / 2] : 0.5 * (d[m / 2 - 1] + d[m / 2]);
  return med > 0.0 ? med : 1.0;
}

int tail_size(RbfTail tail, int dim) {
  switch (tail) {
    case RbfTail::None: return 0;
    case RbfTail::Constant: return 1;
    case RbfTail::Linear: return dim + 1;
  }
  return 0;
}

// Solve with one step of iterative refinement; returns false when the result
// is unusable (non-finite or residual far above round-off).
bool solve_checked(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& out) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd x = lu.solve(b);
  if (!x.allFinite()) return false;
  Eigen::VectorXd r = b - A * x;
  x += lu.solve(r);
  r = b - A * x;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (!x.allFinite() || r.cwiseAbs().maxCoeff() > 1e-7 * scale) return false;
  out = std::move(x);
  return true;
}

double kriging_corr(KrigingKernel kernel, const Eigen::RowVectorXd& a,
                    const Eigen::RowVectorXd& b, const std::vector<double>& ls) {
  double e = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double h = std::abs(a[j] - b[j]) / ls[static_cast<std::size_t>(j)];
    e += (kernel == KrigingKernel::Gaussian) ? h * h : h;
  }
  return std::exp(-e);
}

struct KrigingEval {
  bool ok = false;
  double neg_loglik = std::numeric_limits<double>::infinity();
  double mean = 0.0, variance = 0.0, nugget = 0.0;
  double train_residual = 0.0;  // |prediction - y| at training points (normalized units)
  Eigen::VectorXd alpha;
};

KrigingEval kriging_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               KrigingKernel kernel, const std::vector<double>& ls,
                               double base_nugget) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd R(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    R(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = kriging_corr(kernel, X.row(i), X.row(j), ls);
      R(i, j) = c;
      R(j, i) = c;
    }
  }

  KrigingEval ev;
  for (double nugget = base_nugget; nugget <= 1e-4 + 1e-12; nugget *= 10.0) {
    Eigen::MatrixXd Rn = R;
    Rn.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(Rn);
    if (llt.info() != Eigen::Success) continue;

    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const Eigen::VectorXd Ri_y = llt.solve(y);
    const Eigen::VectorXd Ri_1 = llt.solve(ones);
    const double denom = ones.dot(Ri_1);
    if (denom <= 0.0 || !std::isfinite(denom)) continue;
    const double mu = ones.dot(Ri_y) / denom;
    const Eigen::VectorXd z = y - mu * ones;
    const Eigen::VectorXd alpha = llt.solve(z);
    const double sigma2 = std::max(0.0, z.dot(alpha) / static_cast<double>(n));

    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det += std::log(llt.matrixL()(i, i));
    log_det *= 2.0;

    ev.ok = true;
    ev.mean = mu;
    ev.variance = sigma2;
    ev.nugget = nugget;
    // the prediction at training point i misses y_i by exactly nugget * alpha_i
    ev.train_residual = nugget * alpha.cwiseAbs().maxCoeff();
    ev.alpha = alpha;
    // guard against log(0) for exactly-reproduced (e.g. constant) data
    const double s2 = std::max(sigma2, 1e-300);
    ev.neg_loglik = 0.5 * static_cast<double>(n) * std::log(s2) + 0.5 * log_det;
    return ev;
  }
  return ev;
}

// length scales whose nugget-induced training error breaks interpolation are
// outside the admissible set for the likelihood search
constexpr double kInterpolationGuard = 1e-7;

constexpr double kLengthScaleMin = 0.05;
constexpr double kLengthScaleMax = 1.5;

}  // namespace

std::string ModelSpec::label() const {
  std::string s;
  if (family == ModelFamily::Rbf) {
    s = std::string("rbf-") + rbf_kernel_name(rbf_kernel) + "-tail:" + tail_name(tail);
  } else {
    s = std::string("kriging-") +
        (kriging_kernel == KrigingKernel::Gaussian ? "gaussian" : "exponential");
  }
  s += (input_norm == InputNorm::UnitCube) ? "-norm" : "-raw";
  if (output_norm == OutputNorm::Standardize) s += "-std";
  return s;
}

const std::vector<ModelSpec>& candidate_specs() {
  static const std::vector<ModelSpec> specs = [] {
    std::vector<ModelSpec> out;
    struct Combo {
      RbfKernel k;
      RbfTail t;
    };
    // strictly positive definite kernels admit any tail; conditionally
    // positive definite ones need a tail of at least their order
    const Combo combos[] = {
        {RbfKernel::Gaussian, RbfTail::None},
        {RbfKernel::Gaussian, RbfTail::Constant},
        {RbfKernel::Gaussian, RbfTail::Linear},
        {RbfKernel::InverseMultiquadric, RbfTail::None},
        {RbfKernel::InverseMultiquadric, RbfTail::Constant},
        {RbfKernel::InverseMultiquadric, RbfTail::Linear},
        {RbfKernel::Multiquadric, RbfTail::Constant},
        {RbfKernel::Multiquadric, RbfTail::Linear},
        {RbfKernel::Cubic, RbfTail::Linear},
        {RbfKernel::ThinPlate, RbfTail::Linear},
    };
    for (int norm = 0; norm < 2; ++norm) {
      for (const Combo& c : combos) {
        ModelSpec s;
        s.family = ModelFamily::Rbf;
        s.rbf_kernel = c.k;
        s.tail = c.t;
        s.input_norm = norm ? InputNorm::UnitCube : InputNorm::None;
        s.output_norm = norm ? OutputNorm::Standardize : OutputNorm::None;
        out.push_back(s);
      }
    }
    for (KrigingKernel k : {KrigingKernel::Gaussian, KrigingKernel::Exponential}) {
      ModelSpec s;
      s.family = ModelFamily::Kriging;
      s.kriging_kernel = k;
      s.input_norm = InputNorm::UnitCube;
      s.output_norm = OutputNorm::Standardize;
      out.push_back(s);
    }
    return out;
  }();
  return specs;
}

FittedModel fit_rbf(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                    const ModelSpec& spec) {
  if (X.size() < 2) throw FitFailed("rbf: need at least 2 training points");
  if (X.size() != y.size()) throw FitFailed("rbf: input/output size mismatch");
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j)
      if (X[i] == X[j]) throw FitFailed("rbf: coincident training rows");

  FittedModel m;
  m.spec = spec;
  const Normalizer norm = Normalizer::fit(X, spec.input_norm);
  m.in_shift = norm.shift;
  m.in_scale = norm.scale;
  fit_output_transform(y, spec.output_norm, m.out_shift, m.out_scale);

  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  const int d = static_cast<int>(X[0].size());
  m.centers = normalized_inputs(X, norm);
  m.shape = median_pairwise_distance(m.centers);

  Eigen::VectorXd ty(n);
  for (Eigen::Index i = 0; i < n; ++i) ty[i] = (y[i] - m.out_shift) / m.out_scale;

  const int p = tail_size(spec.tail, d);
  const Eigen::Index size = n + p;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      A(i, j) = rbf_phi(spec.rbf_kernel, (m.centers.row(i) - m.centers.row(j)).norm(), m.shape);
  if (p > 0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      A(i, n) = 1.0;
      A(n, i) = 1.0;
      for (int j = 1; j < p; ++j) {
        A(i, n + j) = m.centers(i, j - 1);
        A(n + j, i) = m.centers(i, j - 1);
      }
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs.head(n) = ty;

  Eigen::VectorXd solution;
  bool solved = false;
  for (double ridge : {0.0, 1e-10, 1e-8}) {
    Eigen::MatrixXd Ar = A;
    Ar.diagonal().head(n).array() += ridge;
    if (solve_checked(Ar, rhs, solution)) {
      solved = true;
      break;
    }
  }
  if (!solved) throw FitFailed("rbf: interpolation system singular (" + spec.label() + ")");

  m.weights = solution.head(n);
  m.tail_coeffs = solution.tail(p);
  return m;
}

FittedModel fit_kriging(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                        const ModelSpec& spec) {
  if (X.size() < 3) throw FitFailed("kriging: need at least 3 training points");
  if (X.size() != y.size()) throw FitFailed("kriging: input/output size mismatch");

  FittedModel m;
  m.spec = spec;
  const Normalizer norm = Normalizer::fit(X, spec.input_norm);
  m.in_shift = norm.shift;
  m.in_scale = norm.scale;
  fit_output_transform(y, spec.output_norm, m.out_shift, m.out_scale);

  const Eigen::Index n = static_cast<Eigen::Index>(X.size());
  const int d = static_cast<int>(X[0].size());
  m.centers = normalized_inputs(X, norm);

  Eigen::VectorXd ty(n);
  for (Eigen::Index i = 0; i < n; ++i) ty[i] = (y[i] - m.out_shift) / m.out_scale;

  auto objective = [&](const std::vector<double>& log_ls) {
    std::vector<double> ls(log_ls.size());
    for (std::size_t j = 0; j < ls.size(); ++j) {
      ls[j] = std::exp(log_ls[j]);
      if (ls[j] < kLengthScaleMin || ls[j] > kLengthScaleMax) return 1e30;
    }
    const KrigingEval ev = kriging_likelihood(m.centers, ty, spec.kriging_kernel, ls, 1e-10);
    if (!ev.ok || ev.nugget > 1e-10 || ev.train_residual > kInterpolationGuard) return 1e30;
    return ev.neg_loglik;
  };

  // deterministic multi-start over the bounded log length-scale box
  const double starts[] = {0.15, 0.6};
  std::vector<double> best_log_ls;
  double best_val = std::numeric_limits<double>::infinity();
  for (double s0 : starts) {
    std::vector<double> start(d, std::log(s0));
    std::vector<double> steps(d, 0.35);
    SimplexOptions opts;
    opts.max_iters = 60 * d;
    opts.size_tol = 1e-6;
    SimplexResult r = nelder_mead(objective, start, steps, opts);
    if (r.value < best_val) {
      best_val = r.value;
      best_log_ls = r.x;
    }
  }
  m.length_scales.assign(d, 0.3);
  if (std::isfinite(best_val) && best_val < 1e30) {
    for (int j = 0; j < d; ++j)
      m.length_scales[j] =
          std::clamp(std::exp(best_log_ls[j]), kLengthScaleMin, kLengthScaleMax);
  }
  // when no admissible interpolating scale exists (degenerate geometry), the
  // default scale with nugget escalation yields a regression-grade fit

  const KrigingEval ev =
      kriging_likelihood(m.centers, ty, spec.kriging_kernel, m.length_scales, 1e-10);
  if (!ev.ok) throw FitFailed("kriging: final factorization failed (" + spec.label() + ")");
  m.mean = ev.mean;
  m.process_variance = ev.variance;
  m.nugget = ev.nugget;
  m.weights = ev.alpha;
  return m;
}

FittedModel fit_model(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                      const ModelSpec& spec) {
  return spec.family == ModelFamily::Rbf ? fit_rbf(X, y, spec) : fit_kriging(X, y, spec);
}

double predict(const FittedModel& m, const DecisionVector& x) {
  const Eigen::Index d = m.centers.cols();
  Eigen::RowVectorXd q(d);
  for (Eigen::Index j = 0; j < d; ++j)
    q[j] = (x[static_cast<std::size_t>(j)] - m.in_shift[static_cast<std::size_t>(j)]) /
           m.in_scale[static_cast<std::size_t>(j)];

  double value = 0.0;
  if (m.spec.family == ModelFamily::Rbf) {
    for (Eigen::Index i = 0; i < m.centers.rows(); ++i)
      value += m.weights[i] * rbf_phi(m.spec.rbf_kernel, (q - m.centers.row(i)).norm(), m.shape);
    if (m.tail_coeffs.size() > 0) {
      value += m.tail_coeffs[0];
      for (Eigen::Index j = 1; j < m.tail_coeffs.size(); ++j)
        value += m.tail_coeffs[j] * q[j - 1];
    }
  } else {
    value = m.mean;
    for (Eigen::Index i = 0; i < m.centers.rows(); ++i)
      value += m.weights[i] *
               kriging_corr(m.spec.kriging_kernel, q, m.centers.row(i), m.length_scales);
  }
  return value * m.out_scale + m.out_shift;
}

FittedModel select_model(const std::vector<DecisionVector>& X, const std::vector<double>& y,
                         const std::vector<ModelSpec>& specs, std::uint64_t seed,
                         SelectionReport* report, int threads) {
  const int n = static_cast<int>(X.size());
  if (n < 10) throw std::invalid_argument("select_model: need at least 10 training points");
  if (specs.empty()) throw std::invalid_argument("select_model: empty candidate list");

  Rng rng(mix({seed, streams::kFitSplit}));
  std::vector<int> idx = rng.permutation(n);
  const int n_train = (n * 4) / 5;

  std::vector<DecisionVector> train_x, val_x;
  std::vector<double> train_y, val_y;
  for (int i = 0; i < n; ++i) {
    if (i < n_train) {
      train_x.push_back(X[idx[i]]);
      train_y.push_back(y[idx[i]]);
    } else {
      val_x.push_back(X[idx[i]]);
      val_y.push_back(y[idx[i]]);
    }
  }

  std::vector<SelectionEntry> entries(specs.size());
  parallel_for(
      specs.size(),
      [&](std::size_t s) {
        entries[s].spec = specs[s];
        try {
          const FittedModel model = fit_model(train_x, train_y, specs[s]);
          double mse = 0.0;
          for (std::size_t v = 0; v < val_x.size(); ++v) {
            const double e = predict(model, val_x[v]) - val_y[v];
            mse += e * e;
          }
          mse /= static_cast<double>(val_x.size());
          entries[s].mse = std::isfinite(mse) ? mse : std::numeric_limits<double>::infinity();
          entries[s].failed = !std::isfinite(mse);
        } catch (const FitFailed&) {
          entries[s].failed = true;
        }
      },
      threads);

  int winner = -1;
  for (std::size_t s = 0; s < entries.size(); ++s) {
    if (entries[s].failed) continue;
    if (winner < 0 || entries[s].mse < entries[static_cast<std::size_t>(winner)].mse)
      winner = static_cast<int>(s);
  }
  if (winner < 0) throw FitFailed("select_model: every candidate failed to fit");

  if (report) {
    report->entries = entries;
    report->winner = winner;
  }

  FittedModel final_model = fit_model(X, y, specs[static_cast<std::size_t>(winner)]);
  final_model.validation_mse = entries[static_cast<std::size_t>(winner)].mse;
  return final_model;
}

}  // namespace emopt
