#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace arp {

/// Seedable, splittable source of deviates.
///
/// The engine is `std::mt19937_64` seeded through `std::seed_seq`, both of
/// which are fully specified by the standard, and the uniform/normal
/// transforms are written out here rather than taken from
/// `<random>` distributions (whose algorithms are implementation-defined).
/// A given (seed, stream_id) therefore yields the same sequence on every
/// conforming toolchain.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform deviate in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal deviate by Box–Muller. Deviates are produced in pairs;
  /// the second of each pair is returned by the following call.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Derives `count` child streams. Consumes one draw from this stream, so
  /// splitting twice in a row yields two different families.
  std::vector<RandomStream> split(std::size_t count) {
    const std::uint64_t key = next_u64();
    std::vector<RandomStream> children;
    children.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      children.emplace_back(seed_, mix(key + mix(stream_id_ + 1) + mix(i + 1)));
    }
    return children;
  }

  RandomStream split_one() { return split(1).front(); }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace arp
