#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace simeval {

/// Counter-based random stream (Philox4x32-10).
///
/// The output sequence is a pure function of (master_seed, stream_index) and the number of
/// draws taken so far, so per-image streams can be handed to worker threads in any order and
/// still reproduce the same ensemble. Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Independent child stream. Children of distinct parents or with distinct `index` never share
  /// a (key, stream) pair in practice.
  RngStream split(std::uint64_t index) const;

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t counter_ = 0;  // 64-bit words consumed
  std::array<std::uint64_t, 2> block_{};
};

/// SplitMix64 finalizer; used for key derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace simeval
