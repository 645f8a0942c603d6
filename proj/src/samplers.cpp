#include "cc/samplers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cc/cb.hpp"
#include "cc/errors.hpp"
#include "cc/normalizer.hpp"

namespace cc {

namespace {

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

[[noreturn]] void throw_budget(const char* sampler,
                               const std::vector<double>& params,
                               std::uint64_t budget) {
  std::ostringstream os;
  os << sampler << " sampler exhausted its proposal budget (" << budget
     << " proposals for one draw) at parameters [" << join(params) << "]";
  throw BudgetError(os.str(), budget);
}

}  // namespace

std::string to_string(SamplerMethod m) {
  switch (m) {
    case SamplerMethod::kNaive: return "naive";
    case SamplerMethod::kOrdered: return "ordered";
    case SamplerMethod::kPermutation: return "permutation";
  }
  return "?";
}

std::uint64_t SampleBatch::total_proposals() const {
  return std::accumulate(proposals.begin(), proposals.end(),
                         std::uint64_t{0});
}

PermutationSetup PermutationSetup::from_natural(const NaturalParams& eta) {
  const std::vector<double>& e = eta.eta();
  PermutationSetup s;
  s.eta_tilde.resize(e.size());
  for (size_t i = 0; i + 1 < e.size(); ++i) s.eta_tilde[i] = e[i] - e[i + 1];
  s.eta_tilde.back() = e.back();
  return s;
}

std::vector<double> PermutationSetup::to_natural() const {
  std::vector<double> eta(eta_tilde.size());
  double acc = 0.0;
  for (int i = static_cast<int>(eta_tilde.size()) - 1; i >= 0; --i) {
    acc += eta_tilde[i];
    eta[i] = acc;
  }
  return eta;
}

// ---------------------------------------------------------------------------
// naive

NaiveSampler::NaiveSampler(const NaturalParams& eta) : a_(eta.eta()) {}

SimplexPoint NaiveSampler::draw(RandomStream& rng, std::uint64_t budget,
                                std::uint64_t& proposals) const {
  size_t k1 = a_.size();
  std::vector<double> head(k1);
  for (std::uint64_t attempt = 1;; ++attempt) {
    if (attempt > budget) throw_budget("naive", a_, budget);
    ++proposals;
    double c = 0.0;
    for (size_t i = 0; i < k1; ++i) {
      head[i] = cb_inverse_cdf_natural(rng.uniform(), a_[i]);
      c += head[i];
    }
    if (c <= 1.0) return simplex_from_free(head);
  }
}

// ---------------------------------------------------------------------------
// ordered

OrderedSampler::OrderedSampler(const MeanParams& lambda, bool early_reject)
    : early_reject_(early_reject) {
  int K = lambda.K();
  order_.resize(K);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int i, int j) { return lambda[i] > lambda[j]; });
  double log_ref = std::log(lambda[order_[0]]);
  a_.resize(K - 1);
  for (int j = 1; j < K; ++j)
    a_[j - 1] = std::log(lambda[order_[j]]) - log_ref;
}

SimplexPoint OrderedSampler::draw(RandomStream& rng, std::uint64_t budget,
                                  std::uint64_t& proposals) const {
  size_t k1 = a_.size();
  std::vector<double> head(k1);
  for (std::uint64_t attempt = 1;; ++attempt) {
    if (attempt > budget) throw_budget("ordered", a_, budget);
    ++proposals;
    double c = 0.0;
    bool doomed = false;
    for (size_t j = 0; j < k1; ++j) {
      double u = rng.uniform();  // consumed even once the round is doomed
      if (doomed) continue;
      head[j] = cb_inverse_cdf_natural(u, a_[j]);
      c += head[j];
      if (early_reject_ && c > 1.0) doomed = true;
    }
    if (doomed || c > 1.0) continue;
    SimplexPoint sorted_frame = simplex_from_free(head);
    std::vector<double> x(k1 + 1);
    x[order_[0]] = sorted_frame[static_cast<int>(k1)];  // the filled residual
    for (size_t j = 0; j < k1; ++j)
      x[order_[j + 1]] = sorted_frame[static_cast<int>(j)];
    return SimplexPoint(std::move(x));
  }
}

// ---------------------------------------------------------------------------
// permutation

PermutationSampler::PermutationSampler(const NaturalParams& eta)
    : eta_tilde_(PermutationSetup::from_natural(eta).eta_tilde) {}

SimplexPoint PermutationSampler::draw(RandomStream& rng, std::uint64_t budget,
                                      std::uint64_t& proposals) const {
  size_t k1 = eta_tilde_.size();
  std::vector<double> yp(k1), y(k1), diff(k1);
  std::vector<int> perm(k1);
  for (std::uint64_t attempt = 1;; ++attempt) {
    if (attempt > budget) throw_budget("permutation", eta_tilde_, budget);
    ++proposals;
    // independent CB proposals on the cube, natural parameters eta_tilde
    for (size_t i = 0; i < k1; ++i)
      yp[i] = cb_inverse_cdf_natural(rng.uniform(), eta_tilde_[i]);
    // y = P y': sort ascending; P^{-T} = P for a permutation matrix, so the
    // log density ratio is sum_j (eta_tilde_j - eta_tilde_{p(j)}) y_j.
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int i, int j) { return yp[i] < yp[j]; });
    double s_y = 0.0;
    for (size_t j = 0; j < k1; ++j) {
      y[j] = yp[perm[j]];
      diff[j] = eta_tilde_[j] - eta_tilde_[perm[j]];
      s_y += diff[j] * y[j];
    }
    // kappa over the K vertices 0, e_{K-1}, e_{K-1}+e_{K-2}, ...: running
    // suffix sums of diff, maximized in log domain.
    double kappa_log = 0.0, suffix = 0.0;
    for (size_t j = k1; j-- > 0;) {
      suffix += diff[j];
      kappa_log = std::max(kappa_log, suffix);
    }
    assert(s_y <= kappa_log + 1e-9);
    double u = rng.uniform();
    if (!(std::log(u) < s_y - kappa_log)) continue;
    // x = B^{-1} y: first differences, then the simplex embedding fills
    // x_K = 1 - y_{K-1}.
    std::vector<double> head(k1);
    double prev = 0.0;
    for (size_t j = 0; j < k1; ++j) {
      head[j] = y[j] - prev;
      prev = y[j];
    }
    return simplex_from_free(head);
  }
}

// ---------------------------------------------------------------------------
// batch driver

namespace {

enum class FailKind { kNone, kBudget, kOther };

struct FailSlot {
  FailKind kind = FailKind::kNone;
  std::string message;
  std::uint64_t budget = 0;
};

template <class DrawFn>
void run_blocks(std::size_t n, std::uint64_t seed, const SamplerOptions& opt,
                DrawFn&& fn) {
  std::size_t bs = std::max<std::size_t>(1, opt.block_size);
  std::int64_t nblocks = static_cast<std::int64_t>((n + bs - 1) / bs);
  FailSlot fail;
#pragma omp parallel for schedule(dynamic) if (opt.parallel && nblocks > 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    RandomStream rng(seed + static_cast<std::uint64_t>(b));
    std::size_t lo = static_cast<std::size_t>(b) * bs;
    std::size_t hi = std::min(n, lo + bs);
    try {
      for (std::size_t i = lo; i < hi; ++i) fn(i, rng);
    } catch (const BudgetError& e) {
#pragma omp critical
      if (fail.kind == FailKind::kNone)
        fail = {FailKind::kBudget, e.what(), e.budget()};
    } catch (const std::exception& e) {
#pragma omp critical
      if (fail.kind == FailKind::kNone) fail = {FailKind::kOther, e.what(), 0};
    }
  }
  if (fail.kind == FailKind::kBudget) throw BudgetError(fail.message, fail.budget);
  if (fail.kind == FailKind::kOther) throw std::runtime_error(fail.message);
}

template <class Sampler>
SampleBatch run_batch(const Sampler& s, std::size_t n, std::uint64_t seed,
                      const SamplerOptions& opt) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  SampleBatch out;
  out.seed = seed;
  out.points.resize(n, SimplexPoint({0.5, 0.5}));
  out.proposals.assign(n, 0);
  run_blocks(n, seed, opt, [&](std::size_t i, RandomStream& rng) {
    out.points[i] = s.draw(rng, opt.max_proposals_per_sample, out.proposals[i]);
  });
  return out;
}

}  // namespace

SampleBatch sample_naive(const NaturalParams& eta, std::size_t n,
                         std::uint64_t seed, const SamplerOptions& opt) {
  return run_batch(NaiveSampler(eta), n, seed, opt);
}

SampleBatch sample_ordered(const MeanParams& lambda, std::size_t n,
                           std::uint64_t seed, const SamplerOptions& opt) {
  return run_batch(OrderedSampler(lambda), n, seed, opt);
}

SampleBatch sample_permutation(const NaturalParams& eta, std::size_t n,
                               std::uint64_t seed, const SamplerOptions& opt) {
  return run_batch(PermutationSampler(eta), n, seed, opt);
}

SampleBatch sample(SamplerMethod method, const MeanParams& lambda,
                   std::size_t n, std::uint64_t seed,
                   const SamplerOptions& opt) {
  switch (method) {
    case SamplerMethod::kNaive:
      return sample_naive(mean_to_natural(lambda), n, seed, opt);
    case SamplerMethod::kOrdered:
      return sample_ordered(lambda, n, seed, opt);
    case SamplerMethod::kPermutation:
      return sample_permutation(mean_to_natural(lambda), n, seed, opt);
  }
  throw std::invalid_argument("sample: unknown method");
}

ReparamBatch reparam_sample(const MeanParams& lambda, std::size_t n,
                            std::uint64_t seed, const SamplerOptions& opt) {
  if (n < 1) throw std::invalid_argument("reparam_sample: n must be >= 1");
  NaturalParams eta = mean_to_natural(lambda);
  const std::vector<double>& a = eta.eta();
  size_t k1 = a.size();
  ReparamBatch out;
  out.batch.seed = seed;
  out.batch.points.resize(n, SimplexPoint({0.5, 0.5}));
  out.batch.proposals.assign(n, 0);
  out.uniforms.assign(n, {});
  run_blocks(n, seed, opt, [&](std::size_t i, RandomStream& rng) {
    std::vector<double> u(k1), head(k1);
    for (std::uint64_t attempt = 1;; ++attempt) {
      if (attempt > opt.max_proposals_per_sample)
        throw_budget("reparameterized", a, opt.max_proposals_per_sample);
      ++out.batch.proposals[i];
      double c = 0.0;
      for (size_t j = 0; j < k1; ++j) {
        u[j] = rng.uniform();
        head[j] = cb_inverse_cdf_natural(u[j], a[j]);
        c += head[j];
      }
      if (c <= 1.0) {
        out.batch.points[i] = simplex_from_free(head);
        out.uniforms[i] = u;
        return;
      }
    }
  });
  return out;
}

Eigen::MatrixXd reparam_jacobian(const std::vector<double>& u,
                                 const MeanParams& lambda) {
  int K = lambda.K();
  if (static_cast<int>(u.size()) != K - 1)
    throw std::invalid_argument("reparam_jacobian: dimension mismatch");
  NaturalParams eta = mean_to_natural(lambda);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(K - 1, K);
  for (int i = 0; i < K - 1; ++i) {
    double da = cb_inverse_cdf_natural_da(u[i], eta[i]);
    jac(i, i) = da / lambda[i];
    jac(i, K - 1) = -da / lambda[K - 1];
  }
  return jac;
}

double naive_acceptance_rate(const NaturalParams& eta) {
  // log of t / (e^t - 1), with the limit 0 at t = 0
  auto log_g = [](double t) {
    if (t == 0.0) return 0.0;
    if (std::abs(t) < 1e-8) return -0.5 * t;
    if (t > 0.0) return std::log(t) - t - std::log1p(-std::exp(-t));
    return std::log(-t) - std::log1p(-std::exp(t));
  };
  double lp = -log_normalizer(eta).log_c;  // log C^{-1}
  for (double e : eta.eta()) lp += log_g(e);
  return std::min(std::exp(lp), 1.0);
}

SamplerMethod recommend_sampler(const MeanParams& lambda) {
  double mx = *std::max_element(lambda.lambda().begin(), lambda.lambda().end());
  return mx >= 2.0 / lambda.K() ? SamplerMethod::kOrdered
                                : SamplerMethod::kPermutation;
}

// ---------------------------------------------------------------------------
// benchmark

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (key + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class Sampler>
BenchRow bench_one(const Sampler& s, int K, SamplerMethod m, int trial,
                   std::uint64_t seed, std::uint64_t budget) {
  BenchRow row{K, m, trial, 0, false};
  RandomStream rng(seed);
  try {
    s.draw(rng, budget, row.proposals);
  } catch (const BudgetError&) {
    row.censored = true;
  }
  return row;
}

}  // namespace

std::vector<BenchRow> benchmark_samplers(const std::vector<int>& k_list,
                                         int trials, std::uint64_t seed,
                                         const BenchOptions& opt) {
  if (trials < 1)
    throw std::invalid_argument("benchmark_samplers: trials must be >= 1");
  for (int K : k_list)
    if (K < 2) throw std::invalid_argument("benchmark_samplers: K must be >= 2");
  std::vector<BenchRow> rows(k_list.size() * trials * 3);
  for (size_t ik = 0; ik < k_list.size(); ++ik) {
    int K = k_list[ik];
    double conc =
        opt.prior_concentration > 0.0 ? opt.prior_concentration : 1.0 / K;
    std::int64_t t64 = trials;
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (std::int64_t trial = 0; trial < t64; ++trial) {
      std::uint64_t key = static_cast<std::uint64_t>(K) * 1'000'003u +
                          static_cast<std::uint64_t>(trial);
      std::vector<double> lam;
      if (opt.fixed_uniform_lambda) {
        lam.assign(K, 1.0 / K);
      } else {
        RandomStream lam_rng(mix_seed(seed, key * 4));
        lam = lam_rng.dirichlet_symmetric(conc, K);
      }
      MeanParams lambda(lam);
      NaturalParams eta = mean_to_natural(lambda);
      size_t base = (ik * trials + trial) * 3;
      int t = static_cast<int>(trial);
      rows[base] = bench_one(NaiveSampler(eta), K, SamplerMethod::kNaive, t,
                             mix_seed(seed, key * 4 + 1), opt.budget);
      rows[base + 1] =
          bench_one(OrderedSampler(lambda), K, SamplerMethod::kOrdered, t,
                    mix_seed(seed, key * 4 + 2), opt.budget);
      rows[base + 2] =
          bench_one(PermutationSampler(eta), K, SamplerMethod::kPermutation, t,
                    mix_seed(seed, key * 4 + 3), opt.budget);
    }
  }
  return rows;
}

}  // namespace cc
