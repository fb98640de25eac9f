#pragma once

#include <array>
#include <cstdint>

namespace ata {

// 64-bit finalizer used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ behind a small sampling interface. Every consumer owns its own
// stream object; there is no global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // (0, 1], safe as a log() argument
  double uniform_open01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  // integer in [0, bound)
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  double normal();
  double exponential(double scale);
  double gamma(double shape, double scale);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

namespace stream_domain {
inline constexpr std::uint64_t kTaskTimes = 1;
inline constexpr std::uint64_t kGradientNoise = 2;
inline constexpr std::uint64_t kPolicy = 3;
inline constexpr std::uint64_t kTest = 99;
}  // namespace stream_domain

// Independent stream addressed by (master seed, domain, a, b). The address
// fully determines the sample sequence, so replay does not depend on the
// order in which streams are consumed. Task times use (kTaskTimes, arm,
// round), gradient noise (kGradientNoise, round), policy randomness
// (kPolicy, round).
inline Rng make_stream(std::uint64_t master, std::uint64_t domain,
                       std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s = h ^ domain;
  h = splitmix64(s);
  s = h ^ a;
  h = splitmix64(s);
  s = h ^ b;
  return Rng(splitmix64(s));
}

}  // namespace ata
