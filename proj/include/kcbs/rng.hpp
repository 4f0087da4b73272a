#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace kcbs {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Purpose tags so that independent consumers of one master seed never share
/// a stream.
enum class StreamTag : std::uint64_t {
  Context = 1,
  Blocked = 2,
  Jitter = 3,
  OptimizerStart = 4,
};

/// Seed for stream (tag, major, minor) derived from a master seed. Streams
/// are addressed, not drawn in sequence, so results do not depend on the
/// order or thread in which they are consumed.
constexpr std::uint64_t stream_seed(std::uint64_t master, StreamTag tag, std::uint64_t major,
                                    std::uint64_t minor = 0) noexcept {
  std::uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<std::uint64_t>(tag));
  h = mix64(h ^ major);
  return mix64(h ^ (minor * 0xd1b54a32d192ed03ULL));
}

/// Engine plus the two draws the library needs. Both draws are written out
/// explicitly so sequences are identical across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  Stream(std::uint64_t master, StreamTag tag, std::uint64_t major, std::uint64_t minor = 0)
      : engine_(stream_seed(master, tag, major, minor)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (one variate per call).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kcbs
