#pragma once

#include <cmath>
#include <cstdint>

namespace vcage {

// 64-bit finalizer from splitmix64. All seed derivation and random draws in
// the engine go through this mix; there is no OS entropy or wall clock
// anywhere, so identical seeds give identical outputs bit-for-bit.
constexpr uint64_t mix64(uint64_t x) {
  uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Named seed-split over (base, index, purpose-tag). Substreams derived with
// distinct tags are independent of how much any other substream has consumed,
// so instrumentation added to one code path never perturbs draws elsewhere.
constexpr uint64_t derive_seed(uint64_t base, uint64_t index, uint64_t tag) {
  uint64_t h = mix64(base);
  h = mix64(h ^ mix64(index ^ 0x6a09e667f3bcc908ULL));
  h = mix64(h ^ mix64(tag ^ 0xbb67ae8584caa73bULL));
  return h;
}

// Purpose tags for substream derivation. Values are part of the determinism
// contract: changing one changes every dataset byte downstream.
namespace stream_tag {
inline constexpr uint64_t episode = 1;
inline constexpr uint64_t scene_retry = 2;
inline constexpr uint64_t distractors = 3;
inline constexpr uint64_t scatter = 4;
inline constexpr uint64_t layout = 5;
inline constexpr uint64_t refine = 6;
inline constexpr uint64_t slip_decision = 7;
inline constexpr uint64_t slip_offset = 8;
inline constexpr uint64_t toggle_miss = 9;
inline constexpr uint64_t press_miss = 10;
inline constexpr uint64_t critic = 11;
inline constexpr uint64_t gate_trial = 12;
}  // namespace stream_tag

// Counter-based generator (splitmix64 sequence). Distributions are spelled
// out here instead of using <random> because libstdc++/libc++ do not promise
// identical uniform_/normal_distribution streams.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), counter_(0) {}

  uint64_t seed() const { return seed_; }

  uint64_t next_u64() { return mix64(seed_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1], safe as a log argument
  double uniform_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, one value per call (the sine branch is discarded so the
  // draw count per call is fixed).
  double normal(double sigma) {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Substream derived from the original seed, not the current state.
  Rng fork(uint64_t index, uint64_t tag) const {
    return Rng(derive_seed(seed_, index, tag));
  }

 private:
  uint64_t seed_;
  uint64_t counter_;
};

}  // namespace vcage
