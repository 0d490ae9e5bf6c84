#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

namespace submax {

// Splittable PRNG built on the splitmix64 mixer. Streams are derived by
// hashing (root, purpose, a, b), so independent consumers (per block, per
// oracle, per round) can be replayed without sharing mutable state.
//
// Identity recorded in experiment summaries: name "splitmix64", version 1.
class Rng {
 public:
  static constexpr const char* kName = "splitmix64";
  static constexpr int kVersion = 1;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Derives a decorrelated stream from a root seed and up to three labels.
  static Rng stream(std::uint64_t root, std::uint64_t purpose,
                    std::uint64_t a = 0, std::uint64_t b = 0) {
    return Rng(mix(root ^ mix(purpose ^ mix(a ^ mix(b)))));
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (-n) % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r < threshold);
    return r % n;
  }

  // Standard normal via Box-Muller; no cached spare so state advances by
  // exactly two draws per call.
  double normal() {
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      const std::uint64_t j = below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Stream purpose labels shared across modules; values are arbitrary but fixed
// so recorded seeds replay across versions.
namespace streams {
inline constexpr std::uint64_t kOracle = 0x01;
inline constexpr std::uint64_t kPermutation = 0x02;
inline constexpr std::uint64_t kSphere = 0x03;
inline constexpr std::uint64_t kAdversary = 0x04;
inline constexpr std::uint64_t kGradNoise = 0x05;
inline constexpr std::uint64_t kRounding = 0x06;
inline constexpr std::uint64_t kPerturbation = 0x07;
}  // namespace streams

}  // namespace submax
