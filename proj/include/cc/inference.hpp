#ifndef CC_INFERENCE_HPP
#define CC_INFERENCE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "cc/params.hpp"
#include "cc/samplers.hpp"

namespace cc {

struct Dataset {
  std::vector<SimplexPoint> rows;            // all sharing K
  std::optional<Eigen::MatrixXd> predictors; // n x d when present
  bool standardized = false;                 // whether predictors are z-scored

  int n() const { return static_cast<int>(rows.size()); }
  int K() const { return rows.empty() ? 0 : rows.front().K(); }
  void validate() const;

  // Componentwise average of the rows (the minimal sufficient statistic).
  std::vector<double> sample_mean() const;
};

struct FitReport {
  std::vector<double> eta_hat;  // fitted natural parameters (empty for GLM)
  double log_likelihood = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  // Per-iteration (log-likelihood, gradient infinity norm); the line search
  // guarantees the likelihood column is nondecreasing.
  std::vector<std::pair<double, double>> trace;
};

struct MleOptions {
  int max_iterations = 500;
  // Gradient infinity-norm target. The filled K-th mean component carries
  // the sum of the K-1 head residuals, so this sits two decades below the
  // 1e-8 per-component moment-matching contract; Newton's quadratic tail
  // makes the extra decades free.
  double tolerance = 1e-10;
};

// Newton ascent of l(eta) = log C(eta) + eta . mean(data). The Hessian is
// -covariance(eta), available in closed form and negative definite, so the
// problem is strictly concave; at convergence mean(eta_hat) reproduces the
// sample mean. A sample mean on the simplex boundary raises BoundaryError
// (the supremum is not attained; the MLE escapes toward that face).
FitReport fit_mle(const Dataset& data, const MleOptions& opt = {});

struct GlmModel {
  Eigen::MatrixXd weights;  // d x (K-1)
  Eigen::VectorXd bias;     // K-1
  double l2 = 0.0;
  bool standardized = false;
  Eigen::VectorXd feature_mean;   // d (zeros when not standardized)
  Eigen::VectorXd feature_scale;  // d (ones when not standardized)

  int d() const { return static_cast<int>(weights.rows()); }
  int K() const { return static_cast<int>(weights.cols()) + 1; }
  NaturalParams predict_eta(const Eigen::VectorXd& z) const;
};

struct GlmOptions {
  double l2 = 0.0;
  int max_iterations = 500;
  double tolerance = 1e-6;   // on the gradient infinity norm
  bool standardize = false;  // z-score predictors (recorded in the model)
  std::size_t row_block = 256;  // rows per reduction block
  bool parallel = true;
};

struct GlmFit {
  GlmModel model;
  FitReport report;
};

// Canonical-link CC regression: maximizes
//   sum_i log p(y_i; eta_i = W^T z_i + b) - l2 (|W|_F^2 + |b|^2)
// by gradient ascent with backtracking. The per-row score with respect to
// eta_i is y_i - mean(eta_i) on the K-1 free coordinates.
GlmFit glm_fit(const Dataset& data, const GlmOptions& opt = {});

// The penalized objective at (weights, bias) against the dataset's
// predictors as given, with its analytic gradient on request. glm_fit
// climbs exactly this function.
double glm_objective(const Dataset& data, const Eigen::MatrixXd& weights,
                     const Eigen::VectorXd& bias, double l2,
                     Eigen::MatrixXd* grad_weights = nullptr,
                     Eigen::VectorXd* grad_bias = nullptr);

// Per row: eta = W^T z + b and the analytic mean (a valid simplex point).
std::vector<std::pair<NaturalParams, std::vector<double>>> glm_predict(
    const GlmModel& model, const Eigen::MatrixXd& predictors);

struct BiasRow {
  int n = 0;
  std::vector<double> bias;  // per component: avg(estimate - true mean)
  std::vector<double> se;    // Monte Carlo standard error per component
  std::uint64_t trials = 0;
  std::uint64_t excluded = 0;  // boundary-average datasets (counted, skipped)
};

struct BiasSimOptions {
  std::uint64_t sampler_budget = 10'000'000;
  std::size_t trial_block = 256;  // trials per worker block (seed base + w)
  bool parallel = true;
};

// Draws `trials` datasets of each size n from the truth and records the
// empirical bias of the CC mean-MLE, which equals the dataset average.
std::vector<BiasRow> bias_simulation(const MeanParams& truth,
                                     const std::vector<int>& n_range,
                                     int trials, std::uint64_t seed,
                                     const BiasSimOptions& opt = {});
std::vector<BiasRow> bias_simulation(const NaturalParams& truth,
                                     const std::vector<int>& n_range,
                                     int trials, std::uint64_t seed,
                                     const BiasSimOptions& opt = {});

// Same protocol with the truth redrawn uniformly on the simplex for every
// trial; the bias is measured against each trial's own analytic mean.
std::vector<BiasRow> bias_simulation_uniform_prior(
    int K, const std::vector<int>& n_range, int trials, std::uint64_t seed,
    const BiasSimOptions& opt = {});

}  // namespace cc

#endif  // CC_INFERENCE_HPP
