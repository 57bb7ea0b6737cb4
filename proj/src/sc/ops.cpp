#include "astra/sc/ops.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "astra/common/hash.hpp"
#include "astra/kernels/bitstream.hpp"

namespace astra::sc {

FixedPointValue quantize(double value, std::uint32_t magnitude_bits, double scale) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite input");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("quantize: scale must be finite and > 0");
  if (magnitude_bits < 1 || magnitude_bits > 16) throw std::invalid_argument("quantize: magnitude_bits must be in [1, 16]");

  const double max_code = std::ldexp(1.0, static_cast<int>(magnitude_bits)) - 1.0;
  // nearbyint honours the default round-half-to-even mode.
  double code = std::nearbyint(std::ldexp(std::fabs(value) / scale, static_cast<int>(magnitude_bits)));
  if (code > max_code) code = max_code;

  FixedPointValue out;
  out.magnitude_code = static_cast<std::uint32_t>(code);
  out.negative = out.magnitude_code != 0 && std::signbit(value);
  out.magnitude_bits = magnitude_bits;
  out.scale = scale;
  return out;
}

std::uint16_t comparator_level(const FixedPointValue& v) {
  return static_cast<std::uint16_t>(v.magnitude_code << (16 - v.magnitude_bits));
}

StochasticNumber binary_to_stochastic(const FixedPointValue& v, const ScConfig& cfg, const RngChannel& channel) {
  if (channel.kind() != cfg.generator) {
    throw std::invalid_argument("binary_to_stochastic: channel generator does not match config");
  }
  if (v.magnitude_bits != cfg.magnitude_bits) {
    throw std::invalid_argument("binary_to_stochastic: operand has " + std::to_string(v.magnitude_bits) +
                                " magnitude bits, config expects " + std::to_string(cfg.magnitude_bits));
  }
  StochasticNumber out;
  out.negative = v.negative;
  out.source_channel = channel.id();
  out.stream = Bitstream(cfg.stream_length);
  const auto thresholds = channel.thresholds(cfg.stream_length);
  kernels::encode_threshold(comparator_level(v), thresholds, out.stream.words());
  return out;
}

StochasticNumber ossm_multiply(const StochasticNumber& x, const StochasticNumber& w) {
  if (x.stream.length() != w.stream.length()) {
    throw std::invalid_argument("ossm_multiply: stream lengths differ (" + std::to_string(x.stream.length()) +
                                " vs " + std::to_string(w.stream.length()) + ")");
  }
  if (x.source_channel == w.source_channel) throw std::invalid_argument("correlated operands");

  StochasticNumber out;
  out.negative = x.negative != w.negative;
  out.source_channel = ChannelId{hash_combine(x.source_channel.value, w.source_channel.value)};
  out.stream = Bitstream(x.stream.length());
  const auto& a = x.stream.words();
  const auto& b = w.stream.words();
  auto& dst = out.stream.words();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] & b[i];
  return out;
}

double stochastic_to_value(const StochasticNumber& s, const ScConfig& /*cfg*/) {
  if (s.stream.length() == 0) return 0.0;
  const double magnitude = static_cast<double>(s.stream.popcount()) / static_cast<double>(s.stream.length());
  return s.negative ? -magnitude : magnitude;
}

double sc_multiply_error_model(double p, double q, std::uint64_t n) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("sc_multiply_error_model: p and q must be in [0, 1]");
  }
  if (n == 0) throw std::invalid_argument("sc_multiply_error_model: n must be >= 1");
  const double pq = p * q;
  return pq * (1.0 - pq) / static_cast<double>(n);
}

}  // namespace astra::sc
