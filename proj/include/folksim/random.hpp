#pragma once

// Portable seeded streams. std::mt19937_64 and std::seed_seq have fully
// specified output; the standard distributions do not, so bounded draws and
// shuffles are done here to keep results identical across standard libraries.

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace folksim {

using Engine = std::mt19937_64;

/// Purposes keep streams derived from the same (seed, index) independent.
enum class StreamPurpose : std::uint32_t { split = 1, query = 2, generate = 3, test = 4 };

inline Engine derive_stream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return Engine(seq);
}

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_below(Engine& rng, std::uint64_t bound) {
  // Rejection sampling on the largest multiple of bound.
  const std::uint64_t limit = Engine::max() - Engine::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Engine& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace folksim
