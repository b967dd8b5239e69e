#pragma once

// Counter-based pseudo-random streams with bitwise-reproducible output on
// every platform. std::* distributions are implementation-defined, so all
// sampling used for scenario synthesis goes through this header. Streams are
// derived from a master seed as stream_seed = hash64(master, stream_index);
// independent streams can be consumed concurrently.

#include <cstdint>

namespace rsp::rng {

// Identifier persisted alongside any synthetic data set.
inline constexpr const char* kAlgorithm = "splitmix64";

// 64-bit finalizer of the splitmix64 generator.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  static Stream derive(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Stream(hash64(master_seed, stream_index));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be >= 1.
  std::uint64_t next_below(std::uint64_t n);

  // Standard normal via Box-Muller (two uniform draws per call).
  double next_gaussian();

  // Weibull by inverse transform.
  double next_weibull(double scale, double shape);

 private:
  std::uint64_t state_;
};

}  // namespace rsp::rng
