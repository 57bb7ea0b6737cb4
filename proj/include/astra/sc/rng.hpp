#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "astra/sc/types.hpp"

namespace astra::sc {

/// Threshold source of one binary-to-stochastic comparator. The emitted
/// sequence is a pure function of (kind, master_seed, channel id).
///
///  - LowDiscrepancy: Sobol dimension selected by the operand role (Left uses
///    the base-2 van der Corput dimension), with a per-channel digital shift.
///    The first 2^m thresholds are a permutation of the grid {k / 2^m}, and a
///    Left/Right pair forms a digitally shifted (t,m,2)-net.
///  - Lfsr: maximal-length 16-bit Galois LFSR with a per-channel seed and
///    feedback polynomial (Left and Right roles never share a polynomial).
///    Each threshold is the register state after 16 further clocks.
///  - ExhaustiveUnary: Left channels emit i / N, so a value p sets the first
///    ceil(p*N) bits. Right channels emit unshifted van der Corput points.
class RngChannel {
 public:
  static RngChannel create(Generator kind, std::uint64_t master_seed, ChannelId id);

  Generator kind() const { return kind_; }
  ChannelId id() const { return id_; }

  /// First out.size() thresholds as 16-bit fractions of full scale.
  void fill_thresholds(std::span<std::uint16_t> out) const;
  std::vector<std::uint16_t> thresholds(std::size_t n) const;

 private:
  RngChannel(Generator kind, ChannelId id, std::uint64_t state) : kind_(kind), id_(id), state_(state) {}

  Generator kind_;
  ChannelId id_;
  std::uint64_t state_;  // digital shift (LowDiscrepancy) or taps/seed (Lfsr)
};

namespace detail {

inline constexpr int kSobolDimensions = 8;

/// 16-bit Sobol point `index` of dimension `dim` (dim 0 is van der Corput).
std::uint16_t sobol_point(int dim, std::uint32_t index);

/// Maximal-length 16-bit Galois feedback masks used by Lfsr channels.
std::span<const std::uint16_t> lfsr_taps();

/// One Galois clock.
constexpr std::uint16_t lfsr_step(std::uint16_t state, std::uint16_t taps) {
  const bool lsb = state & 1u;
  state = static_cast<std::uint16_t>(state >> 1);
  return lsb ? static_cast<std::uint16_t>(state ^ taps) : state;
}

}  // namespace detail

}  // namespace astra::sc
