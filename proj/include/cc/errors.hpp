#ifndef CC_ERRORS_HPP
#define CC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace cc {

// Thrown when a rejection sampler exhausts its proposal budget for a single
// requested draw. Carries the offending parameter vector for diagnostics.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string message, std::uint64_t budget)
      : std::runtime_error(std::move(message)), budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

// Thrown when the empirical average lies on the simplex boundary: the MLE
// diverges toward the face spanned by the nonzero components.
class BoundaryError : public std::runtime_error {
 public:
  BoundaryError(std::string message, std::vector<int> zero_components)
      : std::runtime_error(std::move(message)),
        zero_components_(std::move(zero_components)) {}
  const std::vector<int>& zero_components() const { return zero_components_; }

 private:
  std::vector<int> zero_components_;
};

// Thrown by mode() when the maximal component is not unique.
class ModeTieError : public std::runtime_error {
 public:
  ModeTieError(std::string message, std::vector<int> tied_indices)
      : std::runtime_error(std::move(message)),
        tied_indices_(std::move(tied_indices)) {}
  const std::vector<int>& tied_indices() const { return tied_indices_; }

 private:
  std::vector<int> tied_indices_;
};

}  // namespace cc

#endif  // CC_ERRORS_HPP
