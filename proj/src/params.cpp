#include "cc/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cc {

namespace {

double checked_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

MeanParams::MeanParams(std::vector<double> lambda) : lambda_(std::move(lambda)) {
  if (lambda_.size() < 2)
    throw std::invalid_argument("MeanParams: K must be >= 2");
  for (double v : lambda_) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "MeanParams: components must be strictly positive and finite");
  }
  double s = checked_sum(lambda_);
  if (std::abs(s - 1.0) > 1e-9)
    throw std::invalid_argument("MeanParams: components must sum to 1 (got " +
                                std::to_string(s) + ")");
  if (s != 1.0)
    for (double& v : lambda_) v /= s;
}

NaturalParams::NaturalParams(std::vector<double> eta) : eta_(std::move(eta)) {
  if (eta_.empty())
    throw std::invalid_argument("NaturalParams: K must be >= 2");
  for (double v : eta_)
    if (!std::isfinite(v))
      throw std::invalid_argument("NaturalParams: components must be finite");
}

SimplexPoint::SimplexPoint(std::vector<double> x) : x_(std::move(x)) {
  if (x_.size() < 2)
    throw std::invalid_argument("SimplexPoint: K must be >= 2");
  for (double& v : x_) {
    if (!std::isfinite(v))
      throw std::invalid_argument("SimplexPoint: components must be finite");
    if (v < 0.0) {
      if (v >= -1e-12)
        v = 0.0;
      else
        throw std::invalid_argument("SimplexPoint: negative component " +
                                    std::to_string(v));
    }
  }
  double s = checked_sum(x_);
  if (std::abs(s - 1.0) > 1e-9)
    throw std::invalid_argument("SimplexPoint: components must sum to 1 (got " +
                                std::to_string(s) + ")");
  // Sums within fp noise of 1 pass through untouched: renormalizing by
  // 1 +/- ulp is not idempotent, which would break bit-exact round trips.
  if (std::abs(s - 1.0) > 1e-13)
    for (double& v : x_) v /= s;
}

NaturalParams mean_to_natural(const MeanParams& lambda) {
  int K = lambda.K();
  std::vector<double> eta(K - 1);
  double log_last = std::log(lambda[K - 1]);
  for (int i = 0; i < K - 1; ++i) eta[i] = std::log(lambda[i]) - log_last;
  return NaturalParams(std::move(eta));
}

MeanParams natural_to_mean(const NaturalParams& eta) {
  int K = eta.K();
  double m = 0.0;  // max over (eta_1..eta_{K-1}, 0)
  for (double v : eta.eta()) m = std::max(m, v);
  std::vector<double> lam(K);
  double sum = 0.0;
  for (int i = 0; i < K - 1; ++i) {
    lam[i] = std::exp(eta[i] - m);
    sum += lam[i];
  }
  lam[K - 1] = std::exp(-m);
  sum += lam[K - 1];
  for (double& v : lam) v /= sum;
  return MeanParams(std::move(lam));
}

SimplexPoint mode(const MeanParams& lambda) {
  int K = lambda.K();
  double best = lambda[0];
  for (int i = 1; i < K; ++i) best = std::max(best, lambda[i]);
  std::vector<int> argmax;
  for (int i = 0; i < K; ++i)
    if (lambda[i] == best) argmax.push_back(i);
  if (argmax.size() > 1) {
    std::string msg = "mode: maximal component is tied among indices {";
    for (size_t j = 0; j < argmax.size(); ++j)
      msg += (j ? "," : "") + std::to_string(argmax[j]);
    msg += "}";
    throw ModeTieError(std::move(msg), std::move(argmax));
  }
  std::vector<double> x(K, 0.0);
  x[argmax[0]] = 1.0;
  return SimplexPoint(std::move(x));
}

SimplexPoint simplex_from_free(const std::vector<double>& head) {
  std::vector<double> x(head.size() + 1);
  double s = 0.0;
  for (size_t i = 0; i < head.size(); ++i) {
    x[i] = head[i];
    s += head[i];
  }
  double last = 1.0 - s;
  // Residual correction pins the total at exactly 1 without touching the
  // free coordinates. (s + last) - 1 is computed exactly near 1.
  for (int it = 0; it < 4 && s + last != 1.0; ++it) last -= (s + last) - 1.0;
  x.back() = std::max(last, 0.0);
  return SimplexPoint(std::move(x));
}

}  // namespace cc
