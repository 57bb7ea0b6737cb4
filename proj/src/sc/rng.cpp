#include "astra/sc/rng.hpp"

#include <array>
#include <bit>
#include <cassert>

#include "astra/common/hash.hpp"

namespace astra::sc {
namespace detail {
namespace {

struct SobolInit {
  int degree;
  std::uint32_t poly;  // interior coefficient bits a_1..a_{s-1}
  std::array<std::uint32_t, 5> m;
};

// Joe & Kuo initial direction numbers for dimensions 2..8.
constexpr std::array<SobolInit, kSobolDimensions - 1> kSobolInit{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
}};

using DirectionTable = std::array<std::array<std::uint16_t, 16>, kSobolDimensions>;

constexpr DirectionTable make_directions() {
  DirectionTable v{};
  for (int k = 0; k < 16; ++k) v[0][k] = static_cast<std::uint16_t>(1u << (15 - k));
  for (int d = 1; d < kSobolDimensions; ++d) {
    const SobolInit& init = kSobolInit[d - 1];
    std::array<std::uint32_t, 17> m{};
    for (int k = 1; k <= init.degree; ++k) m[k] = init.m[k - 1];
    for (int k = init.degree + 1; k <= 16; ++k) {
      const int s = init.degree;
      std::uint32_t next = m[k - s] ^ (m[k - s] << s);
      for (int j = 1; j < s; ++j) {
        if ((init.poly >> (s - 1 - j)) & 1u) next ^= m[k - j] << j;
      }
      m[k] = next;
    }
    for (int k = 1; k <= 16; ++k) v[d][k - 1] = static_cast<std::uint16_t>(m[k] << (16 - k));
  }
  return v;
}

constexpr DirectionTable kDirections = make_directions();

constexpr std::array<std::uint16_t, 16> kLfsrTaps{0x8172, 0x822b, 0x84c5, 0x8784, 0x8a43, 0x8a68,
                                                  0x8b21, 0x8c49, 0x8d71, 0x8e74, 0x8fc1, 0x9158,
                                                  0x91a2, 0x953f, 0x961d, 0x9b76};

// 16 Galois clocks are linear over GF(2): split the state into bytes.
struct LeapTable {
  std::array<std::uint16_t, 256> low;
  std::array<std::uint16_t, 256> high;

  std::uint16_t apply(std::uint16_t s) const { return low[s & 0xffu] ^ high[s >> 8]; }
};

constexpr std::uint16_t clock16(std::uint16_t s, std::uint16_t taps) {
  for (int i = 0; i < 16; ++i) s = lfsr_step(s, taps);
  return s;
}

constexpr std::array<LeapTable, kLfsrTaps.size()> make_leap_tables() {
  std::array<LeapTable, kLfsrTaps.size()> out{};
  for (std::size_t t = 0; t < kLfsrTaps.size(); ++t) {
    for (std::uint32_t b = 0; b < 256; ++b) {
      out[t].low[b] = clock16(static_cast<std::uint16_t>(b), kLfsrTaps[t]);
      out[t].high[b] = clock16(static_cast<std::uint16_t>(b << 8), kLfsrTaps[t]);
    }
  }
  return out;
}

const std::array<LeapTable, kLfsrTaps.size()>& leap_tables() {
  static const auto tables = make_leap_tables();
  return tables;
}

std::uint32_t grid_bits(std::size_t n) {
  return n <= 1 ? 0u : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

}  // namespace

std::uint16_t sobol_point(int dim, std::uint32_t index) {
  assert(dim >= 0 && dim < kSobolDimensions);
  std::uint16_t x = 0;
  for (int k = 0; index != 0 && k < 16; ++k, index >>= 1) {
    if (index & 1u) x ^= kDirections[dim][k];
  }
  return x;
}

std::span<const std::uint16_t> lfsr_taps() { return kLfsrTaps; }

}  // namespace detail

RngChannel RngChannel::create(Generator kind, std::uint64_t master_seed, ChannelId id) {
  const std::uint64_t h = hash_combine(master_seed, id.value);
  switch (kind) {
    case Generator::LowDiscrepancy:
      return RngChannel(kind, id, h & 0xffffu);
    case Generator::Lfsr: {
      const auto role_bit = static_cast<std::uint64_t>(id.role()) & 1u;
      const std::uint64_t tap_index = ((mix64(h) % (detail::kLfsrTaps.size() / 2)) * 2) + role_bit;
      const std::uint64_t seed = 1 + (h % 0xffffu);
      return RngChannel(kind, id, (tap_index << 16) | seed);
    }
    case Generator::ExhaustiveUnary:
      return RngChannel(kind, id, 0);
  }
  return RngChannel(kind, id, 0);
}

void RngChannel::fill_thresholds(std::span<std::uint16_t> out) const {
  const std::uint32_t m = detail::grid_bits(out.size());
  switch (kind_) {
    case Generator::LowDiscrepancy: {
      const int dim = static_cast<int>(static_cast<std::uint8_t>(id_.role())) % detail::kSobolDimensions;
      // Shift only the top m bits so the first 2^m points stay on the grid.
      const auto grid_mask = static_cast<std::uint16_t>(m == 0 ? 0u : (0xffffu << (16 - m)) & 0xffffu);
      const auto shift = static_cast<std::uint16_t>(state_ & grid_mask);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint16_t>(detail::sobol_point(dim, static_cast<std::uint32_t>(i)) ^ shift);
      }
      break;
    }
    case Generator::Lfsr: {
      const auto& leap = detail::leap_tables()[state_ >> 16];
      auto s = static_cast<std::uint16_t>(state_ & 0xffffu);
      for (auto& t : out) {
        s = leap.apply(s);
        t = static_cast<std::uint16_t>(s - 1);
      }
      break;
    }
    case Generator::ExhaustiveUnary: {
      if (id_.role() == OperandRole::Left) {
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] = static_cast<std::uint16_t>(m == 0 ? 0u : (i << (16 - m)));
        }
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] = detail::sobol_point(0, static_cast<std::uint32_t>(i));
        }
      }
      break;
    }
  }
}

std::vector<std::uint16_t> RngChannel::thresholds(std::size_t n) const {
  std::vector<std::uint16_t> out(n);
  fill_thresholds(out);
  return out;
}

}  // namespace astra::sc
