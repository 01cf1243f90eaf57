#pragma once

#include <algorithm>
#include <cstdint>

namespace hsq {

/// One SplitMix64 output for state x.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: output k is a pure function of (key, k), so a
/// stream can be replayed or forked without carrying hidden state beyond the
/// counter. Distributions are implemented here rather than with <random> so
/// sequences are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept
      : key_(key), hashed_(mix64(key)) {}

  /// Per-trial stream: seed XOR trial index.
  static CounterRng for_trial(std::uint64_t seed, std::uint64_t trial) noexcept {
    return CounterRng(seed ^ trial);
  }

  /// Independent child stream labelled by `tag`.
  CounterRng substream(std::uint64_t tag) const noexcept {
    return CounterRng(mix64(hashed_ ^ mix64(tag)));
  }

  std::uint64_t operator()() noexcept {
    return mix64(hashed_ + (++counter_) * 0xD1B54A32D192ED03ULL);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, bound), bound > 0. Lemire's nearly-divisionless method.
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <class It>
  void shuffle(It first, It last) noexcept {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const std::uint64_t j = below(i);
      std::iter_swap(first + (i - 1), first + j);
    }
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~0ULL; }

 private:
  std::uint64_t key_;
  std::uint64_t hashed_;
  std::uint64_t counter_ = 0;
};

}  // namespace hsq
