#include "cc/normalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cc {

namespace detail {

namespace {

// Divided difference of exp over the m nodes s[0..m-1], all lying within a
// narrow cell. Expands about the midpoint c:
//   dd = exp(c) * sum_{q>=0} h_q(s - c) / (m - 1 + q)!
// where h_q is the complete homogeneous symmetric polynomial. The series
// terms fall off like (cell width / 2)^q / q!, so a short sum reaches
// machine precision; truncation stops once a term is negligible.
double taylor_cell(const double* s, int m) {
  constexpr int kMaxOrder = 30;
  double c = 0.5 * (s[0] + s[m - 1]);
  double h[kMaxOrder + 1] = {1.0};
  for (int l = 0; l < m; ++l) {
    double d = s[l] - c;
    for (int q = 1; q <= kMaxOrder; ++q) h[q] += d * h[q - 1];
  }
  double fact = 1.0;  // (m - 1)!
  for (int p = 2; p < m; ++p) fact *= p;
  double sum = 0.0;
  for (int q = 0; q <= kMaxOrder; ++q) {
    double term = h[q] / fact;
    sum += term;
    if (q > 0 &&
        std::abs(term) <= std::numeric_limits<double>::epsilon() * std::abs(sum))
      break;
    fact *= m + q;
  }
  return std::exp(c) * sum;
}

bool narrow_gap(double a, double b) {
  return b - a < 1e-4 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double exp_divided_difference(std::vector<double> nodes, double shift) {
  for (double& v : nodes) v -= shift;
  std::sort(nodes.begin(), nodes.end());
  int m = static_cast<int>(nodes.size());
  std::vector<double> t(m);
  for (int i = 0; i < m; ++i) t[i] = std::exp(nodes[i]);
  // t[i] holds the divided difference over nodes[i .. i+len] after each pass.
  for (int len = 1; len < m; ++len) {
    for (int i = 0; i + len < m; ++i) {
      double a = nodes[i], b = nodes[i + len];
      if (narrow_gap(a, b))
        t[i] = taylor_cell(nodes.data() + i, len + 1);
      else
        t[i] = (t[i + 1] - t[i]) / (b - a);
    }
  }
  return t[0];
}

}  // namespace detail

LogNormalizer log_normalizer(const NaturalParams& eta) {
  std::vector<double> nodes(eta.eta());
  nodes.push_back(0.0);
  double center = *std::max_element(nodes.begin(), nodes.end());
  double dd = detail::exp_divided_difference(nodes, center);
  LogNormalizer out;
  out.center = center;
  out.log_c = -(center + std::log(dd));
  out.nodes = std::move(nodes);
  for (double& v : out.nodes) v -= center;
  return out;
}

double log_normalizer_lambda(const MeanParams& lambda) {
  // prod lambda_i^{x_i} = exp(eta . x) * lambda_K, so the normalizers differ
  // by exactly log lambda_K.
  return log_normalizer(mean_to_natural(lambda)).log_c -
         std::log(lambda[lambda.K() - 1]);
}

double log_normalizer_literal(const NaturalParams& eta) {
  std::vector<double> nodes(eta.eta());
  nodes.push_back(0.0);
  int K = static_cast<int>(nodes.size());
  double shift = *std::max_element(nodes.begin(), nodes.end());
  double sum = 0.0;
  for (int k = 0; k < K; ++k) {
    double denom = 1.0;
    for (int i = 0; i < K; ++i)
      if (i != k) denom *= nodes[i] - nodes[k];
    sum += std::exp(nodes[k] - shift) / denom;
  }
  if ((K + 1) % 2 != 0) sum = -sum;  // (-1)^{K+1}
  return -(shift + std::log(sum));
}

double log_pdf(const SimplexPoint& x, const NaturalParams& eta,
               const LogNormalizer& ln) {
  if (x.K() != eta.K())
    throw std::invalid_argument("log_pdf: dimension mismatch");
  double dot = 0.0;
  for (int i = 0; i < eta.K() - 1; ++i) dot += eta[i] * x[i];
  return ln.log_c + dot;
}

double log_pdf(const SimplexPoint& x, const NaturalParams& eta) {
  return log_pdf(x, eta, log_normalizer(eta));
}

double log_pdf_lambda(const SimplexPoint& x, const MeanParams& lambda) {
  if (x.K() != lambda.K())
    throw std::invalid_argument("log_pdf_lambda: dimension mismatch");
  double dot = 0.0;
  for (int i = 0; i < lambda.K(); ++i) dot += x[i] * std::log(lambda[i]);
  return log_normalizer_lambda(lambda) + dot;
}

}  // namespace cc
