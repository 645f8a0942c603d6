#ifndef CC_TESTS_QUADRATURE_HPP
#define CC_TESTS_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace cctest {

// Adaptive Gauss-Kronrod (G7,K15) on [a,b] to an absolute tolerance.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol);

// Integral of f(x_1, ..., x_{K-1}) over the solid simplex
// {x >= 0, sum x_i <= 1} by nested adaptive 1-D quadrature.
double integrate_simplex(int K,
                         const std::function<double(const std::vector<double>&)>& f,
                         double tol);

// Solve F(x) = u for x in [0,1] by bisection, where F is the quadrature CDF
// of the (unnormalized) density `dens`.
double invert_quadrature_cdf(const std::function<double(double)>& dens,
                             double u, double tol);

}  // namespace cctest

#endif
