#include "cc/cb.hpp"

#include <cmath>
#include <stdexcept>

namespace cc {

namespace {

constexpr double kNaturalSeriesCut = 2e-6;  // |a| below this -> series
constexpr double kLamSeriesCut = 1e-6;      // |2*lam-1| below this -> series

void check_u(double u) {
  if (!(u >= 0.0 && u <= 1.0))
    throw std::invalid_argument("cb: u must lie in [0,1]");
}

void check_lam(double lam) {
  if (!(lam > 0.0 && lam < 1.0))
    throw std::invalid_argument("cb: lam must lie in (0,1)");
}

// F^{-1}(u) = u + (a/2) u(1-u) + (a^2/6) u(1-u)(1-2u)
//               + (a^3/24) u(1-u)(1-6u+6u^2) + O(a^4)
double quantile_series(double u, double a) {
  double w = u * (1.0 - u);
  return u + a * w * (0.5 + a * ((1.0 - 2.0 * u) / 6.0 +
                                 a * (1.0 - 6.0 * u * (1.0 - u)) / 24.0));
}

double quantile_series_da(double u, double a) {
  double w = u * (1.0 - u);
  return w * (0.5 + a * ((1.0 - 2.0 * u) / 3.0 +
                         a * (1.0 - 6.0 * u * (1.0 - u)) / 8.0));
}

}  // namespace

double logit(double lam) {
  check_lam(lam);
  double e = 2.0 * lam - 1.0;
  // atanh is cancellation-free near 1/2; the log form is exact at the tails.
  if (std::abs(e) < 0.5) return 2.0 * std::atanh(e);
  return std::log(lam) - std::log1p(-lam);
}

double cb_inverse_cdf_natural(double u, double a) {
  check_u(u);
  if (!std::isfinite(a))
    throw std::invalid_argument("cb: natural parameter must be finite");
  if (u == 0.0) return 0.0;
  if (u == 1.0) return 1.0;
  if (std::abs(a) < kNaturalSeriesCut) return quantile_series(u, a);
  if (a <= 690.0) return std::log1p(u * std::expm1(a)) / a;
  // 1 + u(e^a - 1) = u e^a (1 + (1-u) e^{-a} / u): avoid overflowing expm1.
  return 1.0 + (std::log(u) + std::log1p((1.0 - u) * std::exp(-a) / u)) / a;
}

double cb_inverse_cdf_natural_da(double u, double a) {
  check_u(u);
  if (u == 0.0 || u == 1.0) return 0.0;  // endpoints are pinned
  if (std::abs(a) < kNaturalSeriesCut) return quantile_series_da(u, a);
  double x = cb_inverse_cdf_natural(u, a);
  // d/da log1p(u expm1(a)) = u e^a / (1 + u(e^a - 1)), written to stay
  // bounded for any a.
  double p = a > 0.0 ? u / (u + (1.0 - u) * std::exp(-a))
                     : u * std::exp(a) / (1.0 + u * std::expm1(a));
  return (p - x) / a;
}

double cb_cdf_natural(double x, double a) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("cb: x must lie in [0,1]");
  if (std::abs(a) < 1e-9) return x + a * x * (1.0 - x) * 0.5;
  if (std::abs(a) <= 690.0) return std::expm1(a * x) / std::expm1(a);
  if (a > 0.0)
    return std::exp(a * (x - 1.0)) * -std::expm1(-a * x) / -std::expm1(-a);
  return std::expm1(a * x) / std::expm1(a);  // a very negative: no overflow
}

double cb_inverse_cdf(double u, double lam) {
  check_u(u);
  check_lam(lam);
  if (std::abs(2.0 * lam - 1.0) < kLamSeriesCut) {
    if (u == 0.0 || u == 1.0) return u;
    return quantile_series(u, 2.0 * std::atanh(2.0 * lam - 1.0));
  }
  return cb_inverse_cdf_natural(u, logit(lam));
}

double cb_inverse_cdf_dlam(double u, double lam) {
  check_u(u);
  check_lam(lam);
  // chain rule through a = logit(lam): da/dlam = 1 / (lam (1 - lam))
  return cb_inverse_cdf_natural_da(u, logit(lam)) / (lam * (1.0 - lam));
}

double cb_cdf(double x, double lam) {
  check_lam(lam);
  return cb_cdf_natural(x, logit(lam));
}

}  // namespace cc
