#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "pdfa/word.hpp"

namespace pdfa {

// Seeded generator used for every random draw in the library. Doubles are
// built from the top 53 bits so streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer over (root, stream); independent child seeds for rounds/workers.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Categorical draw over a distribution vector. Rounding slack at the top end
// falls to the last positive entry.
inline Symbol draw(std::span<const double> dist, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    acc += dist[i];
    last_positive = i;
    if (u < acc) return static_cast<Symbol>(i);
  }
  return static_cast<Symbol>(last_positive);
}

} // namespace pdfa
