#include "rsapi/rng.hpp"

namespace rsapi {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_next(std::uint64_t& state) noexcept {
  state += kGolden;
  return mix64(state);
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels) {
  // Position-dependent absorption: (1, 2) and (2, 1) give different keys.
  std::uint64_t key = mix64(master_seed ^ 0x6a09e667f3bcc909ULL);
  std::uint64_t position = 0;
  for (const std::uint64_t label : labels) {
    ++position;
    key = mix64(key ^ mix64(label + kGolden * position));
  }
  key = mix64(key + position);
  for (auto& word : state_) word = splitmix_next(key);
  // xoshiro must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = kGolden;
}

}  // namespace rsapi
