#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rsapi {

/// Purpose tags used as the first stream label. Values are part of the
/// determinism contract: changing them changes every experiment output.
enum class StreamTag : std::uint64_t {
  rollout = 1,
  evaluation = 2,
  test_states = 3,
  oracle = 4,
  brute_force = 5,
};

/// Counter-free pseudo-random stream (xoshiro256**) whose initial state is a
/// pure function of a master seed and a list of integer labels.
///
/// Streams are cheap to construct, so the allocators create one per
/// (purpose, iteration, state, sweep) tuple instead of sharing generators
/// across tasks. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t master_seed) : RngStream(master_seed, {}) {}
  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels);

  template <class... Labels>
  static RngStream labeled(std::uint64_t master_seed, StreamTag tag, Labels... labels) {
    return RngStream(master_seed,
                     {static_cast<std::uint64_t>(tag), static_cast<std::uint64_t>(labels)...});
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// SplitMix64 finalizer; exposed for seed derivation in the harness.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace rsapi
