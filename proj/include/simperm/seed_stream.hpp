#pragma once

#include <cstdint>
#include <limits>

namespace simperm {

// Deterministic counter-based random stream.
//
// Every stochastic operation takes a SeedStream explicitly. Parallel loops
// derive one stream per trial with `SeedStream::derive(master, index)`, so the
// draws of trial i depend only on (master, i) and never on how trials are
// scheduled across threads.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014); stream derivation
// mixes the trial index through the same finalizer.
class SeedStream {
 public:
  using result_type = std::uint64_t;

  explicit SeedStream(std::uint64_t seed = 0) : state_(seed) {}

  static SeedStream derive(std::uint64_t master, std::uint64_t index) {
    return SeedStream(mix(master ^ mix(index + 0x9e3779b97f4a7c15ULL)));
  }

  // Child stream keyed by `index`, leaving this stream untouched.
  SeedStream child(std::uint64_t index) const { return derive(state_, index); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection, so
  // results are identical on every platform.
  std::uint64_t uniform(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    if (bound <= 1) return 0;
    u128 m = static_cast<u128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  std::uint64_t state() const { return state_; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace simperm
