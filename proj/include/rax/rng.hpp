#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace rax {

/// Seedable random stream that can be split into independent children.
///
/// A child depends only on the parent's seed and the child index, never on how
/// many draws the parent has consumed, so work distributed across any number
/// of workers reproduces the same draws given the master seed.
class RngStream {
 public:
  using Engine = std::mt19937_64;

  explicit RngStream(std::uint64_t seed);

  [[nodiscard]] RngStream split(std::uint64_t index) const;

  /// Uniform draw on [0, 1).
  double uniform();

  Engine& engine() { return engine_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  Engine engine_;
};

/// Index i with cumulative mass of probs[0..i] first exceeding u; the last
/// index with positive mass absorbs rounding slack.
int sample_categorical(std::span<const double> probs, double u);

}  // namespace rax
