// Wall-clock comparison of the serial and OpenMP-parallel batch kernels.
// The two paths share the same block decomposition and seed rule, so their
// outputs are bit-identical; this target measures only throughput.

#include <omp.h>

#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "cc/inference.hpp"
#include "cc/params.hpp"
#include "cc/samplers.hpp"

namespace {

template <class Fn>
double time_once(Fn&& fn) {
  double t0 = omp_get_wtime();
  fn();
  return omp_get_wtime() - t0;
}

void report(const char* kernel, double serial_s, double parallel_s) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", kernel, serial_s, parallel_s,
              serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n = 400'000;
  int K = 6;
  std::uint64_t seed = 1;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string f = argv[i];
    if (f == "--n") n = std::stoull(argv[i + 1]);
    else if (f == "--k") K = std::stoi(argv[i + 1]);
    else if (f == "--seed") seed = std::stoull(argv[i + 1]);
  }
  std::printf("threads=%d  n=%zu  K=%d  seed=%llu\n", omp_get_max_threads(), n,
              K, static_cast<unsigned long long>(seed));
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  std::vector<double> lam(K);
  double s = 0.0;
  for (int i = 0; i < K; ++i) s += lam[i] = 1.0 + i;
  for (double& v : lam) v /= s;
  cc::MeanParams skewed(lam);
  cc::NaturalParams eta_uniform(std::vector<double>(K - 1, 0.0));

  cc::SamplerOptions ser, par;
  ser.parallel = false;
  par.parallel = true;

  report("ordered sampler batch",
         time_once([&] { cc::sample_ordered(skewed, n, seed, ser); }),
         time_once([&] { cc::sample_ordered(skewed, n, seed, par); }));
  report("permutation sampler batch",
         time_once([&] { cc::sample_permutation(eta_uniform, n, seed, ser); }),
         time_once([&] { cc::sample_permutation(eta_uniform, n, seed, par); }));
  report("naive sampler batch",
         time_once([&] {
           cc::sample_naive(cc::mean_to_natural(skewed), n / 10, seed, ser);
         }),
         time_once([&] {
           cc::sample_naive(cc::mean_to_natural(skewed), n / 10, seed, par);
         }));

  std::vector<int> n_range{2, 5, 10};
  cc::BiasSimOptions bser, bpar;
  bser.parallel = false;
  bpar.parallel = true;
  int trials = static_cast<int>(n / 40);
  report("bias simulation",
         time_once([&] {
           cc::bias_simulation_uniform_prior(3, n_range, trials, seed, bser);
         }),
         time_once([&] {
           cc::bias_simulation_uniform_prior(3, n_range, trials, seed, bpar);
         }));
  return 0;
}
