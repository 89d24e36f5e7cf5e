#include "rax/rng.hpp"

#include <stdexcept>

namespace rax {
namespace {

// SplitMix64 finalizer; used only to derive well-separated child seeds.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(mix64(seed_ ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

double RngStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

int sample_categorical(std::span<const double> probs, double u) {
  if (probs.empty()) throw std::invalid_argument("sample_categorical: empty distribution");
  double cumulative = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (u < cumulative) return last_positive;
  }
  if (last_positive < 0) throw std::invalid_argument("sample_categorical: no positive mass");
  return last_positive;
}

}  // namespace rax
