#ifndef FLOPART_RNG_HPP
#define FLOPART_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace flopart {

// Uniform in [0, 1) built from raw engine output. Distribution classes are
// implementation-defined; raw bits keep seeded runs byte-identical.
inline double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// Poisson sampler, product-of-uniforms method. Large means are split into
// chunks so exp(-mean) stays away from underflow; chunk size 30 keeps the
// expected number of uniforms per chunk modest.
inline std::int64_t poisson_sample(std::mt19937_64& rng, double mean) {
  std::int64_t total = 0;
  while (mean > 0.0) {
    double chunk = mean > 30.0 ? 30.0 : mean;
    mean -= chunk;
    double limit = std::exp(-chunk);
    double prod = uniform01(rng);
    while (prod > limit) {
      ++total;
      prod *= uniform01(rng);
    }
  }
  return total;
}

}  // namespace flopart

#endif
