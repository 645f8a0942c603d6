#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "cc/cb.hpp"
#include "cc/errors.hpp"
#include "cc/moments.hpp"
#include "cc/params.hpp"
#include "cc/rng.hpp"
#include "cc/samplers.hpp"
#include "support/stats.hpp"

using namespace cc;
using cctest::kZ99;
using doctest::Approx;

namespace {

std::vector<double> column(const SampleBatch& b, int i) {
  std::vector<double> v;
  v.reserve(b.points.size());
  for (const SimplexPoint& p : b.points) v.push_back(p[i]);
  return v;
}

// Every coordinate mean within z standard errors of the analytic mean.
void check_means(const SampleBatch& b, const NaturalParams& eta, double z) {
  int K = eta.K();
  std::size_t n = b.points.size();
  std::vector<double> mu = mean(eta);
  Eigen::MatrixXd cov = covariance(eta);
  for (int i = 0; i < K; ++i) {
    double var;
    if (i < K - 1) {
      var = cov(i, i);
    } else {
      var = cov.sum();  // var(1 - sum of head) = 1' cov 1
    }
    double se = std::sqrt(var / static_cast<double>(n));
    double got = cctest::sample_mean(column(b, i));
    INFO("coordinate ", i, ": got ", got, " want ", mu[i], " se ", se);
    CHECK(std::abs(got - mu[i]) <= z * se);
  }
}

// 99% band for the acceptance estimate n / proposals (delta method on the
// inverse of a mean of geometrics).
void check_acceptance(const SampleBatch& b, double p, double z = kZ99) {
  double n = static_cast<double>(b.points.size());
  double got = n / static_cast<double>(b.total_proposals());
  double se = p * std::sqrt((1.0 - p) / n);
  INFO("acceptance got ", got, " want ", p, " se ", se);
  CHECK(std::abs(got - p) <= z * se);
}

// Acceptance rate of the ordered sampler in closed form: the naive rate of
// the relabeled problem whose reference component is the largest lambda.
double ordered_acceptance_rate(const MeanParams& lambda) {
  int K = lambda.K();
  std::vector<int> idx(K);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int i, int j) { return lambda[i] > lambda[j]; });
  std::vector<double> a(K - 1);
  for (int j = 1; j < K; ++j)
    a[j - 1] = std::log(lambda[idx[j]]) - std::log(lambda[idx[0]]);
  return naive_acceptance_rate(NaturalParams(a));
}

}  // namespace

// ---------------------------------------------------------------------------
// naive sampler

TEST_CASE("naive sampler: K=2 accepts every proposal") {
  SampleBatch b = sample_naive(NaturalParams({1.7}), 5000, 5);
  CHECK(b.total_proposals() == 5000);
  check_means(b, NaturalParams({1.7}), 4.0);
}

TEST_CASE("naive sampler: uniform K=3 accepts half the proposals") {
  NaturalParams eta({0.0, 0.0});
  SampleBatch b = sample_naive(eta, 50'000, 101);
  check_acceptance(b, 0.5);
  check_means(b, eta, 4.0);
}

TEST_CASE("naive sampler: mean matches analytic mean at eta=(1,2)") {
  NaturalParams eta({1.0, 2.0});
  SampleBatch b = sample_naive(eta, 100'000, 7);
  check_means(b, eta, 4.0);
}

TEST_CASE("naive acceptance-rate formula") {
  CHECK(naive_acceptance_rate(NaturalParams({0.0, 0.0})) ==
        Approx(0.5).epsilon(1e-12));
  for (double e : {-3.0, 0.0, 2.5})
    CHECK(naive_acceptance_rate(NaturalParams({e})) == Approx(1.0).epsilon(1e-12));

  // frozen from the pre-build oracle run
  NaturalParams eta({1.0, -2.0, 3.0});
  double rate = naive_acceptance_rate(eta);
  CHECK(rate == Approx(0.080115333416072220).epsilon(1e-10));
  // Monte Carlo agreement at ~1e5 proposals
  std::size_t n = static_cast<std::size_t>(rate * 1e5);
  SampleBatch b = sample_naive(eta, n, 13);
  check_acceptance(b, rate);
}

TEST_CASE("proposal budget failure is loud and names the parameters") {
  NaturalParams eta(std::vector<double>(9, 0.0));  // K=10 uniform: 1/9! accept
  SamplerOptions opt;
  opt.max_proposals_per_sample = 2;
  try {
    sample_naive(eta, 4, 99, opt);
    FAIL("expected BudgetError");
  } catch (const BudgetError& e) {
    CHECK(e.budget() == 2);
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
    CHECK(std::string(e.what()).find("0") != std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// ordered sampler

TEST_CASE("ordered sampler: unbalanced lambda accepts nearly always") {
  MeanParams lam({0.98, 0.01, 0.01});
  SampleBatch b = sample_ordered(lam, 10'000, 3);
  double rate = 10'000.0 / b.total_proposals();
  CHECK(rate >= 0.9);
  check_means(b, mean_to_natural(lam), 4.0);
}

TEST_CASE("ordered sampler: uniform lambda matches the naive rate 1/2") {
  MeanParams lam({1.0 / 3, 1.0 / 3, 1.0 / 3});
  SampleBatch b = sample_ordered(lam, 50'000, 17);
  check_acceptance(b, 0.5);
}

TEST_CASE("ordered sampler: mean matches analytic mean") {
  MeanParams lam({0.5, 0.3, 0.2});
  SampleBatch b = sample_ordered(lam, 100'000, 23);
  check_means(b, mean_to_natural(lam), 4.0);
}

TEST_CASE("ordered rate dominates naive rate for random lambda") {
  RandomStream rng(29);
  for (int K = 3; K <= 8; ++K) {
    for (int t = 0; t < 100; ++t) {
      MeanParams lam(rng.uniform_simplex(K));
      double ord = ordered_acceptance_rate(lam);
      double nai = naive_acceptance_rate(mean_to_natural(lam));
      INFO("K=", K, " trial=", t);
      CHECK(ord >= nai - 1e-12);
    }
  }
}

TEST_CASE("early rejection changes neither draws nor stream position") {
  // Same lambda, same single stream; the early-rejecting sampler must
  // produce identical draws because doomed rounds still consume all K-1
  // uniforms (only the quantile transforms are skipped).
  MeanParams lam({0.30, 0.25, 0.25, 0.20});
  OrderedSampler with(lam, true), without(lam, false);
  RandomStream ra(31), rb(31);
  for (int s = 0; s < 20'000; ++s) {
    std::uint64_t pa = 0, pb = 0;
    SimplexPoint a = with.draw(ra, 1'000'000, pa);
    SimplexPoint b = without.draw(rb, 1'000'000, pb);
    CHECK(pa == pb);
    for (int j = 0; j < 4; ++j) CHECK(a[j] == b[j]);
  }
}

TEST_CASE("ordered equals naive when lambda is rotated pre-sorted") {
  // Arrange lambda so the reference component the ordered sampler picks is
  // exactly the naive sampler's lambda_K and the drawn components already
  // appear in decreasing order; the two samplers then walk the same uniform
  // stream through the same CB parameters and must agree bit for bit.
  MeanParams lam({0.3, 0.2, 0.1, 0.4});
  NaiveSampler naive(mean_to_natural(lam));
  OrderedSampler ordered(lam);
  RandomStream ra(37), rb(37);
  for (int s = 0; s < 20'000; ++s) {
    std::uint64_t pa = 0, pb = 0;
    SimplexPoint a = naive.draw(ra, 1'000'000, pa);
    SimplexPoint b = ordered.draw(rb, 1'000'000, pb);
    CHECK(pa == pb);
    for (int j = 0; j < 4; ++j) CHECK(a[j] == b[j]);
  }
}

// ---------------------------------------------------------------------------
// permutation sampler

TEST_CASE("permutation setup round trips") {
  PermutationSetup s = PermutationSetup::from_natural(NaturalParams({3.0, 1.0, -2.0}));
  CHECK(s.eta_tilde[0] == Approx(2.0).epsilon(1e-15));
  CHECK(s.eta_tilde[1] == Approx(3.0).epsilon(1e-15));
  CHECK(s.eta_tilde[2] == Approx(-2.0).epsilon(1e-15));
  RandomStream rng(41);
  for (int t = 0; t < 30; ++t) {
    int k1 = 1 + static_cast<int>(rng.uniform() * 8);
    std::vector<double> eta(k1);
    for (double& v : eta) v = -5.0 + 10.0 * rng.uniform();
    std::vector<double> back =
        PermutationSetup::from_natural(NaturalParams(eta)).to_natural();
    for (int i = 0; i < k1; ++i)
      CHECK(back[i] == Approx(eta[i]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("permutation sampler accepts every proposal in the uniform case") {
  for (int K : {2, 3, 5, 8}) {
    NaturalParams eta(std::vector<double>(K - 1, 0.0));
    SampleBatch b = sample_permutation(eta, 5000, 43);
    CHECK(b.total_proposals() == 5000);
  }
}

TEST_CASE("permutation sampler: K=2 is plain inverse-CDF sampling") {
  NaturalParams eta({-2.3});
  SampleBatch b = sample_permutation(eta, 20'000, 47);
  CHECK(b.total_proposals() == 20'000);
  check_means(b, eta, 4.0);
}

TEST_CASE("permutation sampler agrees with ordered at eta=(1,2)") {
  NaturalParams eta({1.0, 2.0});
  SampleBatch bp = sample_permutation(eta, 50'000, 53);
  check_means(bp, eta, 4.0);
  SampleBatch bo = sample_ordered(natural_to_mean(eta), 50'000, 59);
  for (int i = 0; i < 3; ++i) {
    cctest::KsResult ks = cctest::ks_two_sample(column(bp, i), column(bo, i));
    INFO("coordinate ", i, " D=", ks.statistic, " threshold ", ks.threshold);
    CHECK(!ks.rejected);
  }
}

TEST_CASE("acceptance ratio never exceeds the vertex bound") {
  // re-derive alpha for raw proposals: kappa is the max over the K prefix
  // vertices, so log alpha = s(y) - kappa_log <= 0 must hold for every
  // proposal, accepted or not.
  RandomStream rng(61);
  for (int t = 0; t < 40; ++t) {
    int K = 2 + static_cast<int>(rng.uniform() * 6);
    std::vector<double> eta(K - 1);
    for (double& v : eta) v = -6.0 + 12.0 * rng.uniform();
    PermutationSetup setup = PermutationSetup::from_natural(NaturalParams(eta));
    const std::vector<double>& et = setup.eta_tilde;
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> yp(K - 1);
      for (int i = 0; i < K - 1; ++i)
        yp[i] = cb_inverse_cdf_natural(rng.uniform(), et[i]);
      std::vector<int> perm(K - 1);
      std::iota(perm.begin(), perm.end(), 0);
      std::stable_sort(perm.begin(), perm.end(),
                       [&](int i, int j) { return yp[i] < yp[j]; });
      double s_y = 0.0;
      std::vector<double> diff(K - 1);
      for (int j = 0; j < K - 1; ++j) {
        diff[j] = et[j] - et[perm[j]];
        s_y += diff[j] * yp[perm[j]];
      }
      double kappa_log = 0.0, suffix = 0.0;
      for (int j = K - 2; j >= 0; --j) {
        suffix += diff[j];
        kappa_log = std::max(kappa_log, suffix);
      }
      CHECK(s_y <= kappa_log + 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------
// reparameterization

TEST_CASE("reparameterization reproduces samples bit for bit") {
  MeanParams lam({0.4, 0.3, 0.3});
  NaturalParams eta = mean_to_natural(lam);
  ReparamBatch rb = reparam_sample(lam, 10'000, 67);
  REQUIRE(rb.uniforms.size() == rb.batch.points.size());
  for (std::size_t s = 0; s < rb.uniforms.size(); ++s) {
    const std::vector<double>& u = rb.uniforms[s];
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      double x = cb_inverse_cdf_natural(u[i], eta[i]);
      CHECK(x == rb.batch.points[s][i]);  // exact reconstruction
      sum += x;
    }
    CHECK(sum <= 1.0);
  }
  check_means(rb.batch, eta, 4.0);
}

TEST_CASE("reparameterization jacobian matches finite differences") {
  MeanParams lam({0.4, 0.3, 0.3});
  RandomStream rng(71);
  for (int t = 0; t < 25; ++t) {
    std::vector<double> u{0.02 + 0.96 * rng.uniform(),
                          0.02 + 0.96 * rng.uniform()};
    Eigen::MatrixXd jac = reparam_jacobian(u, lam);
    // perturb each free lambda coordinate of the unnormalized map
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 3; ++j) {
        double h = 1e-6;
        auto eval = [&](double delta_j) {
          std::vector<double> l{lam[0], lam[1], lam[2]};
          l[j] += delta_j;
          double lp = l[i] / (l[i] + l[2]);
          return cb_inverse_cdf(u[i], lp);
        };
        double fd = (eval(h) - eval(-h)) / (2.0 * h);
        INFO("row ", i, " col ", j);
        CHECK(std::abs(jac(i, j) - fd) <= 1e-6 * std::max(0.5, std::abs(fd)));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// batch mechanics

TEST_CASE("identical seeds give bit-identical batches") {
  NaturalParams eta({0.7, -1.1, 0.2});
  SampleBatch a = sample_permutation(eta, 9000, 73);
  SampleBatch b = sample_permutation(eta, 9000, 73);
  REQUIRE(a.points.size() == b.points.size());
  CHECK(a.seed == b.seed);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.proposals[i] == b.proposals[i]);
    for (int j = 0; j < 4; ++j) CHECK(a.points[i][j] == b.points[i][j]);
  }
  SampleBatch c = sample_permutation(eta, 9000, 74);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.points.size() && !any_diff; ++i)
    any_diff = a.points[i][0] != c.points[i][0];
  CHECK(any_diff);
}

TEST_CASE("parallel and serial batch paths are bit-identical") {
  MeanParams lam({0.45, 0.25, 0.2, 0.1});
  SamplerOptions par, ser;
  par.parallel = true;
  ser.parallel = false;
  par.block_size = ser.block_size = 1024;
  SampleBatch a = sample_ordered(lam, 30'000, 79, par);
  SampleBatch b = sample_ordered(lam, 30'000, 79, ser);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.proposals[i] == b.proposals[i]);
    for (int j = 0; j < 4; ++j) CHECK(a.points[i][j] == b.points[i][j]);
  }
}

TEST_CASE("proposals always cover the accepted draws") {
  NaturalParams eta({1.0, 0.5});
  SampleBatch b = sample_naive(eta, 4000, 83);
  CHECK(b.proposals.size() == b.points.size());
  CHECK(b.total_proposals() >= b.points.size());
  for (std::uint64_t p : b.proposals) CHECK(p >= 1);
}

TEST_CASE("sampler recommendation heuristic") {
  CHECK(recommend_sampler(MeanParams({0.98, 0.01, 0.01})) ==
        SamplerMethod::kOrdered);
  CHECK(recommend_sampler(MeanParams({0.34, 0.33, 0.33})) ==
        SamplerMethod::kPermutation);
  // boundary: max == 2/K picks ordered
  CHECK(recommend_sampler(MeanParams({0.5, 0.3, 0.1, 0.1})) ==
        SamplerMethod::kOrdered);
}

// ---------------------------------------------------------------------------
// benchmark protocol

TEST_CASE("benchmark: K=2 needs exactly one proposal everywhere") {
  std::vector<BenchRow> rows = benchmark_samplers({2}, 25, 89);
  REQUIRE(rows.size() == 75);
  for (const BenchRow& r : rows) {
    CHECK(r.proposals == 1);
    CHECK(!r.censored);
  }
}

TEST_CASE("benchmark: ordered median is never above naive median") {
  std::vector<BenchRow> rows = benchmark_samplers({3, 6}, 100, 97);
  for (int K : {3, 6}) {
    std::vector<double> naive, ordered;
    for (const BenchRow& r : rows) {
      if (r.K != K) continue;
      if (r.method == SamplerMethod::kNaive)
        naive.push_back(static_cast<double>(r.proposals));
      else if (r.method == SamplerMethod::kOrdered)
        ordered.push_back(static_cast<double>(r.proposals));
    }
    REQUIRE(naive.size() == 100);
    std::sort(naive.begin(), naive.end());
    std::sort(ordered.begin(), ordered.end());
    double mn = 0.5 * (naive[49] + naive[50]);
    double mo = 0.5 * (ordered[49] + ordered[50]);
    INFO("K=", K, " median naive ", mn, " ordered ", mo);
    CHECK(mo <= mn);
  }
}

TEST_CASE("benchmark: fixed uniform control") {
  BenchOptions opt;
  opt.fixed_uniform_lambda = true;
  std::vector<BenchRow> rows = benchmark_samplers({6}, 60, 101, opt);
  std::vector<double> naive;
  for (const BenchRow& r : rows) {
    if (r.method == SamplerMethod::kPermutation) CHECK(r.proposals == 1);
    if (r.method == SamplerMethod::kNaive)
      naive.push_back(static_cast<double>(r.proposals));
  }
  // naive needs (K-1)! = 120 proposals per acceptance on average
  double avg = cctest::sample_mean(naive);
  double se = 120.0 / std::sqrt(60.0);  // geometric sd ~ mean
  CHECK(std::abs(avg - 120.0) <= 4.0 * se);
}

TEST_CASE("benchmark rows are reproducible for a fixed seed") {
  std::vector<BenchRow> a = benchmark_samplers({4}, 30, 103);
  std::vector<BenchRow> b = benchmark_samplers({4}, 30, 103);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].proposals == b[i].proposals);
    CHECK(a[i].censored == b[i].censored);
  }
}
