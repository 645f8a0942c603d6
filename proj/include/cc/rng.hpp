#ifndef CC_RNG_HPP
#define CC_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace cc {

// Deterministic random stream. mt19937_64 is fully specified by the standard,
// and all variate transforms below are implemented here rather than with
// std:: distribution objects, whose algorithms are implementation-defined;
// the same seed therefore yields the same draws on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch only, so the stream
  // consumes exactly two uniforms per variate).
  double normal();

  // Gamma(alpha, 1) via Marsaglia-Tsang, with the usual power boost for
  // alpha < 1.
  double gamma(double alpha);

  // Dirichlet(alpha, ..., alpha) by normalizing K gamma draws. Draws are
  // floored at a tiny positive value so components never underflow to zero.
  std::vector<double> dirichlet_symmetric(double alpha, int K);

  // Uniform on the K-simplex, i.e. Dirichlet(1, ..., 1): normalized Exp(1).
  std::vector<double> uniform_simplex(int K);

  std::uint64_t raw() { return gen_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace cc

#endif  // CC_RNG_HPP
