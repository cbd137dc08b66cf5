#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace radiomic {

// Seedable generator passed explicitly wherever randomness is needed.
// Independent sub-streams are derived with fork(), so work split across
// threads draws the same numbers regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), stream_(0), engine_(make_engine(seed, 0)) {}

  std::uint64_t seed() const { return seed_; }

  Rng fork(std::uint64_t stream) const {
    Rng child(seed_);
    child.stream_ = splitmix(stream_ ^ splitmix(stream + 1));
    child.engine_ = make_engine(seed_, child.stream_);
    return child;
  }

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

  double normal(double mean = 0.0, double stddev = 1.0) { return std::normal_distribution<double>(mean, stddev)(engine_); }

  // Circular complex Gaussian with E|z|^2 = power.
  std::complex<double> complex_normal(double power) {
    const double s = std::sqrt(power / 2.0);
    const double re = normal(0.0, 1.0);
    const double im = normal(0.0, 1.0);
    return {s * re, s * im};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x5ad10u};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace radiomic
