#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace steinchaos {

/// Philox4x32-10 block function: one 128-bit counter and a 64-bit key
/// produce four 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/**
 * Counter-based random stream. The seed is the Philox key; the counter is
 * (draw index, stream id), so the variate at a given (seed, stream_id, index)
 * is a pure function of those three numbers and parallel schedules cannot
 * change it.
 *
 * uniform(i) and normal(i) read the same counter block; a consumer should use
 * one or the other for a given index.
 */
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent stream with the same seed and a derived stream id.
  RandomStream substream(std::uint64_t tag) const;

  std::array<std::uint32_t, 4> block(std::uint64_t index) const;

  /// 64 random bits from the first half of block(index).
  std::uint64_t bits(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform(std::uint64_t index) const;

  /// Standard normal via Box-Muller on the two 64-bit halves of block(index).
  double normal(std::uint64_t index) const;

  /// Uniform integer on [0, n) (n >= 1), Lemire multiply-shift.
  std::uint64_t below(std::uint64_t index, std::uint64_t n) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

/// count i.i.d. N(0,1) draws: element k is stream.normal(first_index + k).
std::vector<double> sample_std_normal(const RandomStream& stream, std::size_t count,
                                      std::uint64_t first_index = 0);

}  // namespace steinchaos
