#include "cc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cc/errors.hpp"
#include "cc/moments.hpp"
#include "cc/normalizer.hpp"

namespace cc {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

NaturalParams to_params(const Eigen::VectorXd& eta) {
  return NaturalParams(std::vector<double>(eta.data(), eta.data() + eta.size()));
}

}  // namespace

void Dataset::validate() const {
  if (rows.empty()) throw std::invalid_argument("Dataset: n must be >= 1");
  int k = rows.front().K();
  for (const SimplexPoint& p : rows)
    if (p.K() != k)
      throw std::invalid_argument("Dataset: rows must share one K");
  if (predictors) {
    if (predictors->rows() != n())
      throw std::invalid_argument(
          "Dataset: predictor rows must match observation count");
    if (!predictors->allFinite())
      throw std::invalid_argument("Dataset: predictors must be finite");
  }
}

std::vector<double> Dataset::sample_mean() const {
  std::vector<double> m(K(), 0.0);
  for (const SimplexPoint& p : rows)
    for (int i = 0; i < K(); ++i) m[i] += p[i];
  for (double& v : m) v /= n();
  return m;
}

// ---------------------------------------------------------------------------
// MLE

FitReport fit_mle(const Dataset& data, const MleOptions& opt) {
  data.validate();
  int K = data.K();
  std::vector<double> xbar = data.sample_mean();

  std::vector<int> zeros;
  for (int i = 0; i < K; ++i)
    if (xbar[i] < 1e-12) zeros.push_back(i);
  if (!zeros.empty()) {
    std::ostringstream os;
    os << "fit_mle: the sample mean lies on the simplex boundary (zero "
          "components at indices";
    for (int i : zeros) os << " " << i;
    os << "); the MLE diverges toward that face";
    throw BoundaryError(os.str(), std::move(zeros));
  }

  Eigen::VectorXd target(K - 1);
  for (int i = 0; i < K - 1; ++i) target[i] = xbar[i];

  Eigen::VectorXd eta = Eigen::VectorXd::Zero(K - 1);
  auto objective = [&](const Eigen::VectorXd& e) {
    return log_normalizer(to_params(e)).log_c + target.dot(e);
  };

  FitReport rep;
  double ll = objective(eta);
  for (int it = 0; it < opt.max_iterations; ++it) {
    NaturalParams p = to_params(eta);
    std::vector<double> mu = mean(p);
    Eigen::VectorXd grad(K - 1);
    for (int i = 0; i < K - 1; ++i) grad[i] = target[i] - mu[i];
    double gn = grad.lpNorm<Eigen::Infinity>();
    rep.trace.emplace_back(ll, gn);
    rep.iterations = it;
    rep.grad_norm = gn;
    if (gn <= opt.tolerance) {
      rep.converged = true;
      break;
    }
    // Newton direction: Hessian of the objective is -covariance (SPD).
    Eigen::MatrixXd cov = covariance(p);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    Eigen::VectorXd dir = llt.info() == Eigen::Success ? llt.solve(grad).eval()
                                                       : grad;
    double slope = grad.dot(dir);
    if (slope <= 0.0) {  // numerically degenerate; fall back to the gradient
      dir = grad;
      slope = grad.squaredNorm();
    }
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      double cand = objective(eta + step * dir);
      // strict improvement: near the optimum the sufficient-decrease bound
      // rounds to ll and would accept a null step
      if (cand > ll && cand >= ll + kArmijo * step * slope) {
        eta += step * dir;
        ll = cand;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      // objective gains are below fp resolution; follow the Newton step as
      // long as it shrinks the gradient 2-norm
      double g2 = grad.squaredNorm();
      step = 1.0;
      for (int bt = 0; bt < kMaxBacktracks && !moved; ++bt) {
        Eigen::VectorXd eta2 = eta + step * dir;
        std::vector<double> mu2 = mean(to_params(eta2));
        double g2_new = 0.0;
        for (int i = 0; i < K - 1; ++i) {
          double gi = target[i] - mu2[i];
          g2_new += gi * gi;
        }
        if (g2_new < g2) {
          eta = std::move(eta2);
          ll = objective(eta);
          moved = true;
        } else {
          step *= 0.5;
        }
      }
    }
    if (!moved) break;  // no certifiable progress in either measure
  }
  rep.eta_hat.assign(eta.data(), eta.data() + eta.size());
  rep.log_likelihood = ll;
  return rep;
}

// ---------------------------------------------------------------------------
// GLM

NaturalParams GlmModel::predict_eta(const Eigen::VectorXd& z) const {
  if (z.size() != weights.rows())
    throw std::invalid_argument("GlmModel: predictor dimension mismatch");
  Eigen::VectorXd zz = z;
  if (standardized)
    zz = (zz - feature_mean).cwiseQuotient(feature_scale);
  Eigen::VectorXd eta = weights.transpose() * zz + bias;
  return to_params(eta);
}

namespace {

struct GlmObjective {
  const Eigen::MatrixXd& z;       // n x d (already standardized if requested)
  Eigen::MatrixXd y;              // n x (K-1) free response coordinates
  double l2 = 0.0;
  std::size_t row_block = 256;
  bool parallel = true;

  // Log likelihood and gradient at (W, b). Row blocks are reduced in block
  // order so the result is identical for any thread count.
  double eval(const Eigen::MatrixXd& w, const Eigen::VectorXd& b,
              Eigen::MatrixXd* gw, Eigen::VectorXd* gb) const {
    std::int64_t n = z.rows();
    int k1 = static_cast<int>(y.cols());
    std::size_t bs = std::max<std::size_t>(1, row_block);
    std::int64_t nblocks = (n + bs - 1) / bs;
    std::vector<double> ll_part(nblocks, 0.0);
    std::vector<Eigen::MatrixXd> ge_part;  // d(ll)/d(eta) stacked per block
    if (gw) ge_part.assign(nblocks, Eigen::MatrixXd());
    std::string error;
#pragma omp parallel for schedule(static) if (parallel && nblocks > 1)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
      try {
        std::int64_t lo = blk * bs;
        std::int64_t hi = std::min<std::int64_t>(n, lo + bs);
        Eigen::MatrixXd ge;
        if (gw) ge = Eigen::MatrixXd::Zero(hi - lo, k1);
        double ll = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) {
          Eigen::VectorXd eta = w.transpose() * z.row(i).transpose() + b;
          if (!eta.allFinite()) {
            std::ostringstream os;
            os << "glm_fit: non-finite linear predictor at row " << i;
            throw std::runtime_error(os.str());
          }
          NaturalParams p = to_params(eta);
          ll += log_normalizer(p).log_c + eta.dot(y.row(i).transpose());
          if (gw) {
            std::vector<double> mu = mean(p);
            for (int j = 0; j < k1; ++j) ge(i - lo, j) = y(i, j) - mu[j];
          }
        }
        ll_part[blk] = ll;
        if (gw) ge_part[blk] = std::move(ge);
      } catch (const std::exception& e) {
#pragma omp critical
        if (error.empty()) error = e.what();
      }
    }
    if (!error.empty()) throw std::runtime_error(error);
    double ll = 0.0;
    for (double v : ll_part) ll += v;
    if (gw) {
      gw->setZero(z.cols(), k1);
      gb->setZero(k1);
      for (std::int64_t blk = 0; blk < nblocks; ++blk) {
        std::int64_t lo = blk * bs;
        std::int64_t hi = std::min<std::int64_t>(n, lo + bs);
        *gw += z.middleRows(lo, hi - lo).transpose() * ge_part[blk];
        *gb += ge_part[blk].colwise().sum().transpose();
      }
      *gw -= 2.0 * l2 * w;
      *gb -= 2.0 * l2 * b;
    }
    return ll - l2 * (w.squaredNorm() + b.squaredNorm());
  }
};

GlmObjective make_objective(const Dataset& data, const Eigen::MatrixXd& z,
                            double l2, std::size_t row_block, bool parallel) {
  GlmObjective obj{z, Eigen::MatrixXd(data.n(), data.K() - 1), l2, row_block,
                   parallel};
  for (int i = 0; i < data.n(); ++i)
    for (int j = 0; j < data.K() - 1; ++j) obj.y(i, j) = data.rows[i][j];
  return obj;
}

}  // namespace

double glm_objective(const Dataset& data, const Eigen::MatrixXd& weights,
                     const Eigen::VectorXd& bias, double l2,
                     Eigen::MatrixXd* grad_weights,
                     Eigen::VectorXd* grad_bias) {
  data.validate();
  if (!data.predictors)
    throw std::invalid_argument("glm_objective: dataset has no predictors");
  GlmObjective obj = make_objective(data, *data.predictors, l2, 256, true);
  Eigen::MatrixXd gw;
  Eigen::VectorXd gb;
  bool want = grad_weights != nullptr;
  double ll = obj.eval(weights, bias, want ? &gw : nullptr, want ? &gb : nullptr);
  if (want) {
    *grad_weights = std::move(gw);
    if (grad_bias) *grad_bias = std::move(gb);
  }
  return ll;
}

GlmFit glm_fit(const Dataset& data, const GlmOptions& opt) {
  data.validate();
  if (!data.predictors)
    throw std::invalid_argument("glm_fit: dataset has no predictors");
  int K = data.K();
  int k1 = K - 1;
  std::int64_t n = data.n();
  int d = static_cast<int>(data.predictors->cols());

  GlmModel model;
  model.l2 = opt.l2;
  model.standardized = opt.standardize;
  model.feature_mean = Eigen::VectorXd::Zero(d);
  model.feature_scale = Eigen::VectorXd::Ones(d);

  Eigen::MatrixXd z = *data.predictors;
  if (opt.standardize && !data.standardized) {
    for (int j = 0; j < d; ++j) {
      double m = z.col(j).mean();
      double sd = std::sqrt((z.col(j).array() - m).square().sum() /
                            std::max<std::int64_t>(1, n - 1));
      if (sd <= 0.0) sd = 1.0;
      model.feature_mean[j] = m;
      model.feature_scale[j] = sd;
      z.col(j) = (z.col(j).array() - m) / sd;
    }
  }

  GlmObjective obj = make_objective(data, z, opt.l2, opt.row_block, opt.parallel);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, k1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k1);
  Eigen::MatrixXd gw(d, k1);
  Eigen::VectorXd gb(k1);

  FitReport rep;
  double ll = obj.eval(w, b, &gw, &gb);
  double step = 1.0;
  double bb_trial = 0.0;  // Barzilai-Borwein estimate from the last accept
  for (int it = 0; it < opt.max_iterations; ++it) {
    double gn = std::max(gb.lpNorm<Eigen::Infinity>(),
                         d > 0 ? gw.lpNorm<Eigen::Infinity>() : 0.0);
    rep.trace.emplace_back(ll, gn);
    rep.iterations = it;
    rep.grad_norm = gn;
    if (gn <= opt.tolerance) {
      rep.converged = true;
      break;
    }
    double slope = gw.squaredNorm() + gb.squaredNorm();
    // A plain doubled step hovers at the stability edge 2/L and lets the
    // gradient norm orbit without converging; the Barzilai-Borwein ratio
    // tracks 1/L and keeps the ascent contractive. Backtracking still
    // safeguards it.
    double trial = bb_trial > 0.0 && std::isfinite(bb_trial)
                       ? std::min(bb_trial, 1e6)
                       : std::min(step * 2.0, 1e6);
    bool moved = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      double cand = obj.eval(w + trial * gw, b + trial * gb, nullptr, nullptr);
      // strict improvement required: once trial*slope rounds to nothing the
      // sufficient-decrease test would otherwise accept a null step
      if (cand > ll && cand >= ll + kArmijo * trial * slope) {
        Eigen::MatrixXd gw_old = gw;
        Eigen::VectorXd gb_old = gb;
        w += trial * gw;
        b += trial * gb;
        ll = obj.eval(w, b, &gw, &gb);
        double curve = slope - (gw_old.cwiseProduct(gw).sum() + gb_old.dot(gb));
        bb_trial = curve > 0.0 ? trial * slope / curve : 0.0;
        step = trial;
        moved = true;
        break;
      }
      trial *= 0.5;
    }
    if (!moved) {
      // The certifiable gain trial*slope has fallen below the fp resolution
      // of the n-term objective sum. The gradient itself is still accurate,
      // so keep going as long as a step shrinks the gradient 2-norm
      // (strictly contractive for steps under 2/L, unlike the infinity
      // norm). Restart no lower than 1: the accepted step may have collapsed
      // to a scale whose contraction is below the gradient's own fp noise.
      trial = std::min(std::max(step * 2.0, 1.0), 1e6);
      for (int bt = 0; bt < kMaxBacktracks && !moved; ++bt) {
        Eigen::MatrixXd gw2(gw.rows(), gw.cols());
        Eigen::VectorXd gb2(gb.size());
        double cand = obj.eval(w + trial * gw, b + trial * gb, &gw2, &gb2);
        if (gw2.squaredNorm() + gb2.squaredNorm() < slope) {
          double curve = slope - (gw.cwiseProduct(gw2).sum() + gb.dot(gb2));
          bb_trial = curve > 0.0 ? trial * slope / curve : 0.0;
          w += trial * gw;
          b += trial * gb;
          ll = cand;
          gw = std::move(gw2);
          gb = std::move(gb2);
          step = trial;
          moved = true;
        } else {
          trial *= 0.5;
        }
      }
    }
    if (!moved) break;  // no step improves either measure; report as-is
  }
  rep.log_likelihood = ll;
  model.weights = w;
  model.bias = b;
  return {std::move(model), std::move(rep)};
}

std::vector<std::pair<NaturalParams, std::vector<double>>> glm_predict(
    const GlmModel& model, const Eigen::MatrixXd& predictors) {
  if (predictors.cols() != model.weights.rows())
    throw std::invalid_argument("glm_predict: predictor column mismatch");
  std::vector<std::pair<NaturalParams, std::vector<double>>> out;
  out.reserve(predictors.rows());
  for (std::int64_t i = 0; i < predictors.rows(); ++i) {
    NaturalParams eta = model.predict_eta(predictors.row(i).transpose());
    out.emplace_back(eta, mean(eta));
  }
  return out;
}

// ---------------------------------------------------------------------------
// bias simulation

namespace {

// One block of trials: accumulate sums and squared sums of the per-trial
// bias (estimate minus true mean), plus exclusions.
struct BiasPartial {
  std::vector<double> sum, sum_sq;
  std::uint64_t used = 0, excluded = 0;
};

template <class TruthFn>
std::vector<BiasRow> bias_core(int K, TruthFn&& truth_for_trial,
                               const std::vector<int>& n_range, int trials,
                               std::uint64_t seed, const BiasSimOptions& opt) {
  if (trials < 1)
    throw std::invalid_argument("bias_simulation: trials must be >= 1");
  for (int n : n_range)
    if (n < 1) throw std::invalid_argument("bias_simulation: n must be >= 1");

  SamplerOptions sopt;
  sopt.max_proposals_per_sample = opt.sampler_budget;

  std::vector<BiasRow> rows;
  std::uint64_t seed_stride = 0;
  for (int n : n_range) {
    std::size_t bs = std::max<std::size_t>(1, opt.trial_block);
    std::int64_t nblocks = (trials + bs - 1) / bs;
    std::vector<BiasPartial> parts(nblocks);
    std::string error;
#pragma omp parallel for schedule(dynamic) if (opt.parallel && nblocks > 1)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
      try {
        RandomStream rng(seed + seed_stride + static_cast<std::uint64_t>(blk));
        BiasPartial part;
        part.sum.assign(K, 0.0);
        part.sum_sq.assign(K, 0.0);
        std::int64_t lo = blk * bs;
        std::int64_t hi = std::min<std::int64_t>(trials, lo + bs);
        for (std::int64_t t = lo; t < hi; ++t) {
          auto [lambda, true_mean] = truth_for_trial(rng);
          OrderedSampler sampler(lambda);
          std::vector<double> avg(K, 0.0);
          std::uint64_t props = 0;
          for (int i = 0; i < n; ++i) {
            SimplexPoint x = sampler.draw(rng, opt.sampler_budget, props);
            for (int j = 0; j < K; ++j) avg[j] += x[j];
          }
          bool boundary = false;
          for (int j = 0; j < K; ++j) {
            avg[j] /= n;
            if (avg[j] < 1e-12) boundary = true;
          }
          if (boundary) {  // the mean-MLE does not exist; count and skip
            ++part.excluded;
            continue;
          }
          ++part.used;
          for (int j = 0; j < K; ++j) {
            double bias = avg[j] - true_mean[j];
            part.sum[j] += bias;
            part.sum_sq[j] += bias * bias;
          }
        }
        parts[blk] = std::move(part);
      } catch (const std::exception& e) {
#pragma omp critical
        if (error.empty()) error = e.what();
      }
    }
    if (!error.empty()) throw std::runtime_error(error);

    BiasRow row;
    row.n = n;
    row.bias.assign(K, 0.0);
    row.se.assign(K, 0.0);
    for (const BiasPartial& p : parts) {  // block order: deterministic sums
      row.trials += p.used;
      row.excluded += p.excluded;
      for (int j = 0; j < K; ++j) {
        row.bias[j] += p.sum[j];
        row.se[j] += p.sum_sq[j];
      }
    }
    double t = static_cast<double>(std::max<std::uint64_t>(1, row.trials));
    for (int j = 0; j < K; ++j) {
      double mean_bias = row.bias[j] / t;
      double var = row.se[j] / t - mean_bias * mean_bias;
      row.bias[j] = mean_bias;
      row.se[j] = std::sqrt(std::max(0.0, var) / t);
    }
    rows.push_back(std::move(row));
    seed_stride += static_cast<std::uint64_t>(nblocks);
  }
  return rows;
}

}  // namespace

std::vector<BiasRow> bias_simulation(const MeanParams& truth,
                                     const std::vector<int>& n_range,
                                     int trials, std::uint64_t seed,
                                     const BiasSimOptions& opt) {
  std::vector<double> mu = mean(mean_to_natural(truth));
  return bias_core(
      truth.K(),
      [&](RandomStream&) { return std::make_pair(truth, mu); }, n_range,
      trials, seed, opt);
}

std::vector<BiasRow> bias_simulation(const NaturalParams& truth,
                                     const std::vector<int>& n_range,
                                     int trials, std::uint64_t seed,
                                     const BiasSimOptions& opt) {
  return bias_simulation(natural_to_mean(truth), n_range, trials, seed, opt);
}

std::vector<BiasRow> bias_simulation_uniform_prior(
    int K, const std::vector<int>& n_range, int trials, std::uint64_t seed,
    const BiasSimOptions& opt) {
  if (K < 2)
    throw std::invalid_argument("bias_simulation_uniform_prior: K must be >= 2");
  return bias_core(
      K,
      [K](RandomStream& rng) {
        MeanParams lambda(rng.uniform_simplex(K));
        return std::make_pair(lambda, mean(mean_to_natural(lambda)));
      },
      n_range, trials, seed, opt);
}

}  // namespace cc
