#include <bit>
#include <cassert>

#include "astra/kernels/bitstream.hpp"

namespace astra::kernels::scalar {
namespace {

void encode_threshold(std::uint16_t level, std::span<const std::uint16_t> thresholds,
                      std::span<std::uint64_t> out) {
  assert(out.size() >= words_for_bits(thresholds.size()));
  for (auto& w : out) w = 0;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (level > thresholds[i]) out[i / 64] |= std::uint64_t{1} << (i % 64);
  }
}

std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  assert(a.size() == b.size());
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) count += std::popcount(a[i] & b[i]);
  return count;
}

RailCounts and_popcount_rails(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                              std::span<const std::uint64_t> a_sign,
                              std::span<const std::uint64_t> b_sign) {
  assert(a.size() == b.size() && a.size() == a_sign.size() && a.size() == b_sign.size());
  RailCounts rails;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::uint64_t ones = std::popcount(a[i] & b[i]);
    const std::uint64_t negative = a_sign[i] ^ b_sign[i];
    rails.positive += ones & ~negative;
    rails.negative += ones & negative;
  }
  return rails;
}

std::int64_t dot_i16(std::span<const std::int16_t> a, std::span<const std::int16_t> b) {
  assert(a.size() == b.size());
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::int64_t{a[i]} * b[i];
  return acc;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{"scalar", &encode_threshold, &and_popcount, &and_popcount_rails, &dot_i16};
  return t;
}

}  // namespace astra::kernels::scalar
