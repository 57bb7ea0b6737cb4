#pragma once

#include <cstdint>

#include "astra/sc/rng.hpp"
#include "astra/sc/types.hpp"

namespace astra::sc {

/// Round-to-nearest-even of |value|/scale onto the 2^bits code grid,
/// saturating at 2^bits - 1. A zero code always carries sign 0.
/// Throws std::invalid_argument for non-finite input or scale <= 0.
FixedPointValue quantize(double value, std::uint32_t magnitude_bits, double scale);

/// Comparator level of a code: code / 2^bits as a 16-bit fraction.
std::uint16_t comparator_level(const FixedPointValue& v);

/// B-to-S conversion: bit i is set iff magnitude > threshold_i of `channel`.
/// Throws std::invalid_argument when channel.kind() != cfg.generator or the
/// operand width differs from cfg.magnitude_bits.
StochasticNumber binary_to_stochastic(const FixedPointValue& v, const ScConfig& cfg, const RngChannel& channel);

/// OSSM: AND of the magnitude streams, XOR of the signs.
/// Throws std::invalid_argument on length mismatch or on operands drawn from
/// the same channel ("correlated operands").
StochasticNumber ossm_multiply(const StochasticNumber& x, const StochasticNumber& w);

/// (-1)^sign * popcount / length.
double stochastic_to_value(const StochasticNumber& s, const ScConfig& cfg);

/// Variance pq(1-pq)/n of the decoded AND product of two independent
/// Bernoulli streams of length n.
double sc_multiply_error_model(double p, double q, std::uint64_t n);

}  // namespace astra::sc
