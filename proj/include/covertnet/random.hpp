#pragma once

#include <cstdint>
#include <random>

namespace covertnet {

/// Stateless 64-bit mixer used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the stream owned by (master seed, index). Distinct indices give
/// statistically independent streams.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// A deterministic random stream. Never shared between trials: each trial
/// constructs its own from derive_seed().
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, std::uint64_t index)
      : RandomStream(derive_seed(master, index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with the given mean, by inversion.
  double exponential(double mean = 1.0);
  /// Gamma(shape, 1).
  double gamma(double shape);

  engine_type& engine() noexcept { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace covertnet
