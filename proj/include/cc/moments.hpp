#ifndef CC_MOMENTS_HPP
#define CC_MOMENTS_HPP

#include <Eigen/Dense>
#include <vector>

#include "cc/normalizer.hpp"
#include "cc/params.hpp"

namespace cc {

// E[x] as a full K-vector. E[x_i] = -d log C / d eta_i is evaluated as the
// ratio of the (K+1)-node divided difference with node eta_i repeated to the
// K-node one (confluent differentiation, stable near node ties); the K-th
// component is filled with 1 - sum of the others.
std::vector<double> mean(const NaturalParams& eta);

// Covariance of the K-1 free coordinates: -d^2 log C / d eta_i d eta_j,
// evaluated from divided differences with two repeated nodes. Symmetric
// positive definite.
Eigen::MatrixXd covariance(const NaturalParams& eta);

// KL(p || q) = log C(eta_p) - log C(eta_q) + (eta_p - eta_q) . E_p[x].
double kl_divergence(const NaturalParams& eta_p, const NaturalParams& eta_q);

// Moment generating function M(t) = C(eta) / C(eta + t).
double log_mgf(const NaturalParams& eta, const std::vector<double>& t);
double mgf(const NaturalParams& eta, const std::vector<double>& t);

}  // namespace cc

#endif  // CC_MOMENTS_HPP
