#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace ideatrace {

// All randomness in the library flows through this wrapper around
// std::mt19937_64. The variate transforms are written out explicitly
// instead of using std::*_distribution so that a given seed yields the
// same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), unbiased via masked rejection.
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    if (n == 1) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> __builtin_clzll(n - 1);
    std::uint64_t v;
    do {
      v = gen_() & mask;
    } while (v >= n);
    return v;
  }

  // Index draw proportional to non-negative weights (linear roulette).
  std::size_t discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

  double exponential(double rate) {
    assert(rate > 0.0);
    return -std::log1p(-uniform01()) / rate;
  }

  // Box-Muller with the usual one-value cache.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1, u2;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Marsaglia-Tsang; shape < 1 handled by the boosting identity.
  double gamma(double shape, double scale) {
    assert(shape > 0.0 && scale > 0.0);
    if (shape < 1.0) {
      double u;
      do {
        u = uniform01();
      } while (u <= 0.0);
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v * scale;
    }
  }

  // Knuth multiplication method; adequate for the mean ranges used here.
  std::uint64_t poisson(double mean) {
    assert(mean >= 0.0 && mean < 700.0);
    double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Stream splitting: a child seed is splitmix64 of the master seed xored
// with the FNV-1a hash of a textual label such as "cv/fold3/k5". Children
// with distinct labels are independent for practical purposes and the rule
// is stable across platforms and releases.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return detail::splitmix64(master ^ h);
}

}  // namespace ideatrace
