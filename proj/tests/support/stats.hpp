#ifndef CC_TESTS_STATS_HPP
#define CC_TESTS_STATS_HPP

#include <functional>
#include <vector>

namespace cctest {

inline constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal

struct KsResult {
  double statistic;
  double threshold;  // critical value at the chosen level
  bool rejected;
};

// Two-sample Kolmogorov-Smirnov test; alpha = 0.01 uses c(alpha) = 1.62762.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                       double alpha = 0.01);

// Central finite-difference gradient with the step rule
// h_i = eps^{1/3} * max(1, |x_i|).
std::vector<double> central_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& x);

// Central finite differences of a vector map (used for Hessians via the
// gradient of each component).
std::vector<std::vector<double>> central_jacobian(
    const std::function<std::vector<double>(const std::vector<double>&)>& f,
    const std::vector<double>& x);

double sample_mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

}  // namespace cctest

#endif
