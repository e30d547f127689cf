#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace battleship {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Used to derive independent per-index seeds from a
// single root seed so that batch work can run in parallel yet produce output
// identical to a serial pass.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root ^ splitmix64(stream ^ 0x632be59bd9b4e019ULL));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                                 std::uint64_t stream = 0) {
  return derive_seed(splitmix64(root ^ fnv1a64(tag)), stream);
}

// Unbiased draw in [0, n). std::uniform_int_distribution is implementation
// defined, so results would differ across standard libraries; this keeps
// seeded runs portable.
inline std::uint64_t random_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double random_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates, delegating to random_below for the same portability reason.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(random_below(rng, i));
    using std::swap;
    swap(v[i - 1], v[j]);
  }
}

}  // namespace battleship
