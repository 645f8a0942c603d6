#ifndef CC_PARAMS_HPP
#define CC_PARAMS_HPP

#include <vector>

#include "cc/errors.hpp"

namespace cc {

// Mean parameterization: a strictly positive probability vector of length K.
// The constructor renormalizes inputs whose sum is within 1e-9 of 1 and
// rejects anything further off; after construction |sum - 1| <= 1e-12.
class MeanParams {
 public:
  explicit MeanParams(std::vector<double> lambda);

  int K() const { return static_cast<int>(lambda_.size()); }
  const std::vector<double>& lambda() const { return lambda_; }
  double operator[](int i) const { return lambda_[i]; }

 private:
  std::vector<double> lambda_;
};

// Natural parameterization: eta in R^(K-1), with the K-th coordinate pinned
// to zero and never stored. All entries must be finite.
class NaturalParams {
 public:
  explicit NaturalParams(std::vector<double> eta);

  int K() const { return static_cast<int>(eta_.size()) + 1; }
  const std::vector<double>& eta() const { return eta_; }
  double operator[](int i) const { return eta_[i]; }

 private:
  std::vector<double> eta_;
};

// An observation on the closed simplex: K nonnegative components summing
// to 1. Zeros are valid data. Components in [-1e-12, 0) are clipped to 0
// and sums within 1e-9 of 1 are renormalized (CSV round-trip noise);
// larger violations are rejected.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> x);

  int K() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }

 private:
  std::vector<double> x_;
};

// eta_i = log(lambda_i / lambda_K) for i = 1..K-1.
NaturalParams mean_to_natural(const MeanParams& lambda);

// Softmax of (eta_1, ..., eta_{K-1}, 0) with max subtraction, so entries up
// to |eta_i| ~ 700 do not overflow.
MeanParams natural_to_mean(const NaturalParams& eta);

// The density's maximizer: the vertex of the largest lambda component.
// Throws ModeTieError when the argmax is not unique.
SimplexPoint mode(const MeanParams& lambda);

// Assemble a simplex point from its K-1 free coordinates, filling the last
// one with 1 - sum. The residual of the fill is folded back into the last
// coordinate so the stored sum is exactly 1 and the free coordinates keep
// their bits (rejection samplers rely on this for reparameterization).
SimplexPoint simplex_from_free(const std::vector<double>& head);

}  // namespace cc

#endif  // CC_PARAMS_HPP
