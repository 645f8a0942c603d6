#ifndef CC_SAMPLERS_HPP
#define CC_SAMPLERS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cc/params.hpp"
#include "cc/rng.hpp"

namespace cc {

enum class SamplerMethod { kNaive, kOrdered, kPermutation };

std::string to_string(SamplerMethod m);

struct SamplerOptions {
  // Cap on proposals per requested draw; exceeding it raises BudgetError.
  std::uint64_t max_proposals_per_sample = 10'000'000;
  // Batch generation is decomposed into fixed blocks of draws; block w uses
  // the stream seeded seed + w, so results are identical for any thread
  // count (and for the serial path).
  std::size_t block_size = 4096;
  bool parallel = true;
};

struct SampleBatch {
  std::vector<SimplexPoint> points;
  std::vector<std::uint64_t> proposals;  // per accepted draw
  std::uint64_t seed = 0;
  std::uint64_t total_proposals() const;
};

struct ReparamBatch {
  SampleBatch batch;
  // The accepted uniform vector per draw; applying the CB quantile with
  // natural parameters eta_i componentwise reproduces the stored free
  // coordinates bit for bit.
  std::vector<std::vector<double>> uniforms;
};

// eta_tilde = B^{-T} eta for the lower-triangular all-ones B: first
// differences eta_i - eta_{i+1}, with the last entry passed through.
struct PermutationSetup {
  std::vector<double> eta_tilde;
  static PermutationSetup from_natural(const NaturalParams& eta);
  std::vector<double> to_natural() const;  // B^T eta_tilde (suffix sums)
};

// Single-draw samplers over an explicit stream. Each draw() returns one
// exact CC variate and adds the proposals it consumed to `proposals`.
class NaiveSampler {
 public:
  explicit NaiveSampler(const NaturalParams& eta);
  SimplexPoint draw(RandomStream& rng, std::uint64_t budget,
                    std::uint64_t& proposals) const;

 private:
  std::vector<double> a_;  // CB natural parameters, = eta
};

class OrderedSampler {
 public:
  // Components are drawn in decreasing-lambda order against the largest
  // component, rejecting as soon as the running sum passes 1. Every proposal
  // round consumes exactly K-1 uniforms whether or not it is cut short:
  // early rejection skips the quantile transforms, not stream positions, so
  // a doomed round leaves the stream where a full round would have.
  explicit OrderedSampler(const MeanParams& lambda, bool early_reject = true);
  SimplexPoint draw(RandomStream& rng, std::uint64_t budget,
                    std::uint64_t& proposals) const;

 private:
  std::vector<int> order_;  // indices of lambda, decreasing; order_[0] = ref
  std::vector<double> a_;   // CB natural parameters for order_[1..K-1]
  bool early_reject_;
};

class PermutationSampler {
 public:
  explicit PermutationSampler(const NaturalParams& eta);
  SimplexPoint draw(RandomStream& rng, std::uint64_t budget,
                    std::uint64_t& proposals) const;

 private:
  std::vector<double> eta_tilde_;
};

// Batch front ends. Identical seed (and options) give bit-identical batches.
SampleBatch sample_naive(const NaturalParams& eta, std::size_t n,
                         std::uint64_t seed, const SamplerOptions& opt = {});
SampleBatch sample_ordered(const MeanParams& lambda, std::size_t n,
                           std::uint64_t seed, const SamplerOptions& opt = {});
SampleBatch sample_permutation(const NaturalParams& eta, std::size_t n,
                               std::uint64_t seed,
                               const SamplerOptions& opt = {});
SampleBatch sample(SamplerMethod method, const MeanParams& lambda,
                   std::size_t n, std::uint64_t seed,
                   const SamplerOptions& opt = {});

// Naive proposals with the retained uniforms (supplement-style
// reparameterization; no correction term is needed because rejection
// depends on u only through the proposal's sum).
ReparamBatch reparam_sample(const MeanParams& lambda, std::size_t n,
                            std::uint64_t seed, const SamplerOptions& opt = {});

// Pathwise Jacobian dx_i / dlambda_j at fixed uniforms: rows i = 1..K-1,
// columns j = 1..K; only columns i and K are nonzero.
Eigen::MatrixXd reparam_jacobian(const std::vector<double>& u,
                                 const MeanParams& lambda);

// Exact acceptance probability of the naive sampler:
//   C(eta)^{-1} * prod_{i<K} eta_i / (e^{eta_i} - 1),
// with each factor taking its limit value 1 at eta_i = 0.
double naive_acceptance_rate(const NaturalParams& eta);

// Heuristic: ordered when some component dominates (max lambda >= 2/K),
// permutation otherwise. Exposed so callers can override.
SamplerMethod recommend_sampler(const MeanParams& lambda);

struct BenchRow {
  int K = 0;
  SamplerMethod method = SamplerMethod::kNaive;
  int trial = 0;
  std::uint64_t proposals = 0;
  bool censored = false;
};

struct BenchOptions {
  double prior_concentration = 0.0;  // <= 0 means Dirichlet(1/K)
  std::uint64_t budget = 1'000'000;  // right-censoring point per trial
  bool fixed_uniform_lambda = false; // control: lambda = (1/K, ..., 1/K)
  bool parallel = true;
};

// Proposals needed for one acceptance, per sampler and trial, with a fresh
// lambda ~ Dirichlet(prior) per trial (shared across the three samplers).
std::vector<BenchRow> benchmark_samplers(const std::vector<int>& k_list,
                                         int trials, std::uint64_t seed,
                                         const BenchOptions& opt = {});

}  // namespace cc

#endif  // CC_SAMPLERS_HPP
