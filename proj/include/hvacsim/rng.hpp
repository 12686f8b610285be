#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hvacsim {

// Seeded generator with portable derived distributions. The standard library
// distributions are implementation-defined, so only the raw engine output is
// used and every variate is derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1), safe as a log() argument.
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);
// Independent stream seed for a named sub-stream (e.g. room id plus purpose),
// so results never depend on processing order.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream);

}  // namespace hvacsim
