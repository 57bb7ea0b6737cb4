#include "astra/sc/types.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "astra/common/error.hpp"

namespace astra::sc {

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::LowDiscrepancy: return "low_discrepancy";
    case Generator::Lfsr: return "lfsr";
    case Generator::ExhaustiveUnary: return "exhaustive_unary";
  }
  return "unknown";
}

Generator parse_generator(std::string_view name) {
  if (name == "low_discrepancy") return Generator::LowDiscrepancy;
  if (name == "lfsr") return Generator::Lfsr;
  if (name == "exhaustive_unary") return Generator::ExhaustiveUnary;
  throw ConfigError("unknown generator '" + std::string(name) +
                    "' (expected low_discrepancy, lfsr or exhaustive_unary)");
}

void ScConfig::validate() const {
  if (stream_length == 0 || stream_length > kMaxStreamLength || !std::has_single_bit(stream_length)) {
    throw ConfigError("sc.stream_length must be a power of two in [1, 65536], got " +
                      std::to_string(stream_length));
  }
  if (magnitude_bits < 1 || magnitude_bits > 16) {
    throw ConfigError("sc.magnitude_bits must be in [1, 16], got " + std::to_string(magnitude_bits));
  }
}

double FixedPointValue::magnitude() const { return std::ldexp(static_cast<double>(magnitude_code), -static_cast<int>(magnitude_bits)); }

double FixedPointValue::to_real() const { return (negative ? -1.0 : 1.0) * magnitude() * scale; }

Bitstream::Bitstream(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

std::size_t Bitstream::popcount() const {
  std::size_t n = 0;
  for (auto w : words_) n += std::popcount(w);
  return n;
}

void Bitstream::set(std::size_t i, bool value) {
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= mask;
  } else {
    words_[i / 64] &= ~mask;
  }
}

}  // namespace astra::sc
