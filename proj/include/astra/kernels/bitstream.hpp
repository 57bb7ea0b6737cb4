#pragma once

// Data-parallel inner loops of the stochastic datapath.
//
// Every kernel has a portable scalar reference in astra::kernels::scalar and,
// when compiled in, an AVX2 variant in astra::kernels::avx2. The free
// functions in astra::kernels dispatch to the best variant the running CPU
// supports; ASTRA_SIM_SIMD=scalar forces the reference path. All variants
// are bit-identical (integer arithmetic only).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace astra::kernels {

/// Charge routed to the two accumulator rails.
struct RailCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;

  friend bool operator==(const RailCounts&, const RailCounts&) = default;
};

/// Comparator bank of a binary-to-stochastic converter: bit i of `out` is
/// set iff level > thresholds[i]. Levels and thresholds are 16-bit fractions
/// of full scale. `out` must hold ceil(thresholds.size() / 64) words; bits
/// past the end of the stream are cleared.
using EncodeFn = void (*)(std::uint16_t level, std::span<const std::uint16_t> thresholds,
                          std::span<std::uint64_t> out);

/// popcount(a & b) summed over all words.
using AndPopcountFn = std::uint64_t (*)(std::span<const std::uint64_t> a,
                                        std::span<const std::uint64_t> b);

/// Lanewise AND of two stream arrays with the 1-count of every word routed
/// to the negative rail where a_sign ^ b_sign is all-ones and to the
/// positive rail where it is zero. Sign words must be 0 or ~0.
using AndPopcountRailsFn = RailCounts (*)(std::span<const std::uint64_t> a,
                                          std::span<const std::uint64_t> b,
                                          std::span<const std::uint64_t> a_sign,
                                          std::span<const std::uint64_t> b_sign);

/// Exact integer dot product. Inputs must lie in [-32767, 32767].
using DotI16Fn = std::int64_t (*)(std::span<const std::int16_t> a, std::span<const std::int16_t> b);

struct KernelTable {
  std::string_view name;
  EncodeFn encode_threshold;
  AndPopcountFn and_popcount;
  AndPopcountRailsFn and_popcount_rails;
  DotI16Fn dot_i16;
};

namespace scalar {
const KernelTable& table();
}  // namespace scalar

namespace avx2 {
/// True when the AVX2 variant was compiled in and the CPU supports it.
bool available();
/// Only valid when available() is true.
const KernelTable& table();
}  // namespace avx2

/// The table selected for this process.
const KernelTable& active();

inline std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

inline void encode_threshold(std::uint16_t level, std::span<const std::uint16_t> thresholds,
                             std::span<std::uint64_t> out) {
  active().encode_threshold(level, thresholds, out);
}

inline std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().and_popcount(a, b);
}

inline RailCounts and_popcount_rails(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                     std::span<const std::uint64_t> a_sign,
                                     std::span<const std::uint64_t> b_sign) {
  return active().and_popcount_rails(a, b, a_sign, b_sign);
}

inline std::int64_t dot_i16(std::span<const std::int16_t> a, std::span<const std::int16_t> b) {
  return active().dot_i16(a, b);
}

}  // namespace astra::kernels
