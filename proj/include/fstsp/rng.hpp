#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fstsp {

// Seedable generator with explicit stream splitting. Every stochastic phase
// of the search draws from its own stream derived from (seed, tag), so the
// same seed reproduces the same run regardless of how many draws another
// phase consumed. Bounded draws avoid std::uniform_int_distribution, whose
// output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, bound), bound >= 1. Fixed-point multiply keeps the result
  // identical across standard libraries.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Uniform in [lo, hi] inclusive.
  int next_int(int lo, int hi) {
    return lo + static_cast<int>(next_below(
                    static_cast<std::uint64_t>(hi - lo) + 1));
  }

  double next_double() {  // [0, 1)
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  template <typename It>
  void shuffle(It first, It last) {
    for (auto i = static_cast<std::size_t>(last - first); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(first[i - 1], first[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    shuffle(v.begin(), v.end());
  }

 private:
  std::mt19937_64 gen_;
};

namespace rng_stream {
inline constexpr std::uint64_t kSeedTour = 0x5eed'0001;
inline constexpr std::uint64_t kConstruction = 0x5eed'0002;
inline constexpr std::uint64_t kShuffle = 0x5eed'0003;
inline constexpr std::uint64_t kShake = 0x5eed'0004;
}  // namespace rng_stream

// splitmix64 step; decorrelates seed/tag pairs before feeding mt19937_64.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng derive_stream(std::uint64_t seed, std::uint64_t tag) {
  return Rng(mix64(mix64(seed) ^ mix64(tag)));
}

}  // namespace fstsp
