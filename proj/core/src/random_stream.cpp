#include "steinchaos/random_stream.hpp"

#include <cmath>

#include "steinchaos/gauss_core.hpp"

namespace steinchaos {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double to_open_unit(std::uint64_t x) {
  return (static_cast<double>(x >> 11) + 0.5) * kTwoPow53Inv;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RandomStream RandomStream::substream(std::uint64_t tag) const {
  return RandomStream(seed_, splitmix64(stream_id_ ^ splitmix64(tag + 0x5851F42D4C957F2DULL)));
}

std::array<std::uint32_t, 4> RandomStream::block(std::uint64_t index) const {
  return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                     static_cast<std::uint32_t>(stream_id_),
                     static_cast<std::uint32_t>(stream_id_ >> 32)},
                    {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

std::uint64_t RandomStream::bits(std::uint64_t index) const {
  const auto b = block(index);
  return (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
}

double RandomStream::uniform(std::uint64_t index) const { return to_open_unit(bits(index)); }

double RandomStream::normal(std::uint64_t index) const {
  const auto b = block(index);
  const double u1 = to_open_unit((static_cast<std::uint64_t>(b[0]) << 32) | b[1]);
  const double u2 = to_open_unit((static_cast<std::uint64_t>(b[2]) << 32) | b[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

std::uint64_t RandomStream::below(std::uint64_t index, std::uint64_t n) const {
  return static_cast<std::uint64_t>((static_cast<uint128>(bits(index)) * n) >> 64);
}

std::vector<double> sample_std_normal(const RandomStream& stream, std::size_t count,
                                      std::uint64_t first_index) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = stream.normal(first_index + k);
  return out;
}

}  // namespace steinchaos
