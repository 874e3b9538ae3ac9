#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace apaths {

inline constexpr std::uint64_t kDefaultSeed = 20260823u;

/// Seeded RNG wrapper; every randomized check takes one of these so that
/// suites are reproducible from the seed recorded in the report.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }

  std::vector<double> uniform_vec(int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace apaths
