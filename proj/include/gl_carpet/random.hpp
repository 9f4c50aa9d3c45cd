#ifndef GL_CARPET_RANDOM_HPP_
#define GL_CARPET_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace gl_carpet {

// Seeded generator whose derived variates are computed here rather than by
// <random> distributions, so sequences are identical across standard
// library implementations.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Exp(1).
  double exponential() { return -std::log1p(-uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gl_carpet

#endif  // GL_CARPET_RANDOM_HPP_
