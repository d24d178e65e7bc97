#pragma once

#include <cstdint>
#include <optional>

namespace lsqb {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based SplitMix64 stream. The state advances by the golden gamma on
/// every draw and the output is the finalizer of the new state, so a stream is
/// fully described by its 64-bit state plus the cached polar-method normal.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t state() const { return state_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  friend double normal_sample(RngStream& stream);

  std::uint64_t state_;
  std::optional<double> spare_normal_;
};

}  // namespace lsqb
