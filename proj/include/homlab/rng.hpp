#ifndef HOMLAB_RNG_HPP
#define HOMLAB_RNG_HPP

#include <cstdint>
#include <vector>

namespace homlab {

/// xoshiro256** seeded through splitmix64. Self-contained so that streams,
/// bounded draws and shuffles are bit-for-bit reproducible on every platform
/// (standard-library distributions and std::shuffle are not).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) { seed_state(seed); }

  /// Stream derived deterministically from (seed, stream_index); distinct
  /// indices give statistically independent streams.
  static RandomStream derived(std::uint64_t seed, std::uint64_t stream_index) {
    RandomStream rs(seed ^ (stream_index + 1) * 0x9E3779B97F4A7C15ULL);
    return rs;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform draw from [0, bound); unbiased via rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (-bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  void seed_state(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64(seed);
  }

  std::uint64_t s_[4] = {};
};

}  // namespace homlab

#endif  // HOMLAB_RNG_HPP
