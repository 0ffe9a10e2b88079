#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace chol {

// Seeded generator shared by every randomized check. A run is fully
// determined by the root seed; independent checks draw from split() streams
// so adding a check never perturbs the draws of another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

  double uniform(double lo = 0.0, double hi = 1.0);
  double normal();
  int uniform_int(int lo, int hi);  // inclusive
  std::complex<double> complex_normal();
  // Complex number with modulus in [lo, hi] and uniform phase.
  std::complex<double> complex_annulus(double lo, double hi);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

}  // namespace chol
