#pragma once

#include <cstdint>
#include <limits>

namespace corner {

// Independent random streams inside one trial.
enum class Stream : std::uint64_t {
  matrix = 1,
  gbe = 2,
  weights = 3,
  corner_entry = 4,
  chain = 5,
  projection = 6,
  test = 99,
};

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the k-th output is a fixed hash of (key, k), and
// the key is a hash of (seed, trial, stream). Two generators built from the
// same triple produce the same sequence no matter which thread runs them or
// in which order trials are visited.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t trial, Stream stream) noexcept
      : key_(derive_key(seed, trial, static_cast<std::uint64_t>(stream))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    return mix64(key_ + kGolden * ++counter_);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  static constexpr std::uint64_t derive_key(std::uint64_t seed,
                                            std::uint64_t trial,
                                            std::uint64_t stream) noexcept {
    std::uint64_t k = mix64(seed ^ 0x243F6A8885A308D3ULL);
    k = mix64(k ^ (trial + kGolden));
    k = mix64(k ^ (stream * 0x13198A2E03707344ULL + 0xA4093822299F31D0ULL));
    return k;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace corner
