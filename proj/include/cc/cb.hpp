#ifndef CC_CB_HPP
#define CC_CB_HPP

namespace cc {

// Continuous Bernoulli on [0,1]: density proportional to lam^x (1-lam)^(1-x),
// equivalently exp(a*x) with natural parameter a = logit(lam). The closed
// forms below are expressed through a:
//   F(x)      = expm1(a*x) / expm1(a)
//   F^{-1}(u) = log1p(u * expm1(a)) / a
// which match the lam forms F^{-1}(u) = log(1 + (2*lam-1)*u/(1-lam)) /
// log(lam/(1-lam)) since expm1(a) = (2*lam-1)/(1-lam).

// Quantile function. u in [0,1], lam in (0,1). Near lam = 1/2 (|2*lam-1| <
// 1e-6) the closed form is 0/0; a short series in the natural parameter is
// used there, truncated beyond third order (error < 1e-14 at the switch).
double cb_inverse_cdf(double u, double lam);

// d/dlam of cb_inverse_cdf at fixed u (the pathwise derivative used for
// reparameterization gradients).
double cb_inverse_cdf_dlam(double u, double lam);

double cb_cdf(double x, double lam);

// Natural-parameter forms; a may be any finite real (a = 0 is the uniform).
// These never overflow: for a beyond exp's range the shifted logarithm form
// is used.
double cb_inverse_cdf_natural(double u, double a);
double cb_inverse_cdf_natural_da(double u, double a);
double cb_cdf_natural(double x, double a);

double logit(double lam);

}  // namespace cc

#endif  // CC_CB_HPP
