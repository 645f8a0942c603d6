#include "cc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cc {

double RandomStream::normal() {
  // r = sqrt(-2 log(1-u1)) is safe because 1-u1 lies in (0,1].
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::gamma(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("gamma: alpha must be > 0");
  if (alpha < 1.0) {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  double d = alpha - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> RandomStream::dirichlet_symmetric(double alpha, int K) {
  if (K < 2) throw std::invalid_argument("dirichlet: K must be >= 2");
  std::vector<double> g(K);
  double sum = 0.0;
  for (int i = 0; i < K; ++i) {
    g[i] = std::max(gamma(alpha), 5e-300);
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

std::vector<double> RandomStream::uniform_simplex(int K) {
  if (K < 2) throw std::invalid_argument("uniform_simplex: K must be >= 2");
  std::vector<double> e(K);
  double sum = 0.0;
  for (int i = 0; i < K; ++i) {
    e[i] = std::max(-std::log1p(-uniform()), 5e-300);
    sum += e[i];
  }
  for (double& v : e) v /= sum;
  return e;
}

}  // namespace cc
