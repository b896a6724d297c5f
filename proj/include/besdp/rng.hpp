#pragma once

#include <cstdint>

namespace besdp {

// SplitMix64 finalizer. Stateless; the basis of the keyed counter scheme below.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Counter-based random stream. Every output is a pure function of
// (key, counter), and child streams derive their key by hashing path
// components, so draws are reproducible and independent of the order in
// which sibling streams are consumed.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) noexcept : key_(key) {}

  static RngStream from_seed(std::uint64_t seed) noexcept {
    return RngStream(mix64(seed ^ 0x5DEECE66Dull));
  }

  RngStream child(std::uint64_t a, std::uint64_t b = 0,
                  std::uint64_t c = 0) const noexcept {
    std::uint64_t k = mix64(key_ ^ mix64(a));
    k = mix64(k ^ mix64(b));
    k = mix64(k ^ mix64(c));
    return RngStream(k);
  }

  std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform on the open interval (0,1).
  double next_double() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace besdp
