#include "cc/moments.hpp"

#include <algorithm>
#include <cmath>

namespace cc {

namespace {

std::vector<double> base_nodes(const NaturalParams& eta) {
  std::vector<double> nodes(eta.eta());
  nodes.push_back(0.0);
  return nodes;
}

double with_repeats(const std::vector<double>& nodes, double shift, double a) {
  std::vector<double> n(nodes);
  n.push_back(a);
  return detail::exp_divided_difference(std::move(n), shift);
}

double with_repeats(const std::vector<double>& nodes, double shift, double a,
                    double b) {
  std::vector<double> n(nodes);
  n.push_back(a);
  n.push_back(b);
  return detail::exp_divided_difference(std::move(n), shift);
}

}  // namespace

std::vector<double> mean(const NaturalParams& eta) {
  int K = eta.K();
  std::vector<double> nodes = base_nodes(eta);
  double shift = *std::max_element(nodes.begin(), nodes.end());
  double d0 = detail::exp_divided_difference(nodes, shift);
  std::vector<double> m(K);
  double head = 0.0;
  for (int i = 0; i < K - 1; ++i) {
    m[i] = with_repeats(nodes, shift, eta[i]) / d0;
    head += m[i];
  }
  m[K - 1] = 1.0 - head;
  return m;
}

Eigen::MatrixXd covariance(const NaturalParams& eta) {
  int K = eta.K();
  std::vector<double> nodes = base_nodes(eta);
  double shift = *std::max_element(nodes.begin(), nodes.end());
  double d0 = detail::exp_divided_difference(nodes, shift);
  std::vector<double> m(K - 1);
  for (int i = 0; i < K - 1; ++i)
    m[i] = with_repeats(nodes, shift, eta[i]) / d0;
  Eigen::MatrixXd cov(K - 1, K - 1);
  for (int i = 0; i < K - 1; ++i) {
    // E[x_i^2] = 2 dd(nodes, eta_i, eta_i) / dd(nodes)
    cov(i, i) = 2.0 * with_repeats(nodes, shift, eta[i], eta[i]) / d0 -
                m[i] * m[i];
    for (int j = i + 1; j < K - 1; ++j) {
      double eij = with_repeats(nodes, shift, eta[i], eta[j]) / d0;
      cov(i, j) = cov(j, i) = eij - m[i] * m[j];
    }
  }
  return cov;
}

double kl_divergence(const NaturalParams& eta_p, const NaturalParams& eta_q) {
  if (eta_p.K() != eta_q.K())
    throw std::invalid_argument("kl_divergence: dimension mismatch");
  double out = log_normalizer(eta_p).log_c - log_normalizer(eta_q).log_c;
  std::vector<double> mp = mean(eta_p);
  for (int i = 0; i < eta_p.K() - 1; ++i)
    out += (eta_p[i] - eta_q[i]) * mp[i];
  // Gibbs' inequality guarantees out >= 0; absorb fp noise at the scale of
  // the subtraction so the invariant holds for p == q up to rounding.
  if (out < 0.0 && out > -1e-12) out = 0.0;
  return out;
}

double log_mgf(const NaturalParams& eta, const std::vector<double>& t) {
  if (static_cast<int>(t.size()) != eta.K() - 1)
    throw std::invalid_argument("mgf: dimension mismatch");
  for (double v : t)
    if (!std::isfinite(v))
      throw std::invalid_argument("mgf: t must be finite");
  std::vector<double> shifted(eta.eta());
  for (size_t i = 0; i < shifted.size(); ++i) shifted[i] += t[i];
  return log_normalizer(eta).log_c - log_normalizer(NaturalParams(shifted)).log_c;
}

double mgf(const NaturalParams& eta, const std::vector<double>& t) {
  return std::exp(log_mgf(eta, t));
}

}  // namespace cc
