#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace astra::sc {

enum class Generator : std::uint8_t { LowDiscrepancy, Lfsr, ExhaustiveUnary };

std::string_view to_string(Generator g);
/// Accepts "low_discrepancy", "lfsr", "exhaustive_unary". Throws ConfigError.
Generator parse_generator(std::string_view name);

/// Which side of a multiplication an operand feeds. Operands of one product
/// always come from different roles.
enum class OperandRole : std::uint8_t { Left = 0, Right = 1 };

/// Identifies the comparator/RNG channel that produced a stream. The top
/// byte carries the operand role, the low 56 bits the element index.
struct ChannelId {
  std::uint64_t value = 0;

  static constexpr std::uint64_t kIndexMask = (std::uint64_t{1} << 56) - 1;

  static constexpr ChannelId make(OperandRole role, std::uint64_t element_index) {
    return ChannelId{(std::uint64_t{static_cast<std::uint8_t>(role)} << 56) | (element_index & kIndexMask)};
  }
  constexpr OperandRole role() const { return static_cast<OperandRole>(value >> 56); }
  constexpr std::uint64_t index() const { return value & kIndexMask; }

  friend constexpr bool operator==(ChannelId, ChannelId) = default;
};

struct ScConfig {
  static constexpr std::uint32_t kMaxStreamLength = 1u << 16;

  std::uint32_t stream_length = 128;
  std::uint32_t magnitude_bits = 8;
  Generator generator = Generator::LowDiscrepancy;
  std::uint64_t master_seed = 0;

  /// Throws ConfigError: stream_length must be a power of two in
  /// [1, 65536]; magnitude_bits in [1, 16].
  void validate() const;
};

/// Sign-magnitude fixed-point operand. Decodes to
/// (-1)^negative * magnitude_code / 2^magnitude_bits * scale.
struct FixedPointValue {
  bool negative = false;
  std::uint32_t magnitude_code = 0;
  std::uint32_t magnitude_bits = 8;
  double scale = 1.0;

  double magnitude() const;  // code / 2^bits, in [0, 1)
  double to_real() const;
  std::int32_t signed_code() const {
    return negative ? -static_cast<std::int32_t>(magnitude_code) : static_cast<std::int32_t>(magnitude_code);
  }

  friend bool operator==(const FixedPointValue&, const FixedPointValue&) = default;
};

/// Fixed-length packed bit vector; bit i lives in word i/64 at position i%64.
class Bitstream {
 public:
  Bitstream() = default;
  explicit Bitstream(std::size_t length);

  std::size_t length() const { return length_; }
  std::size_t popcount() const;
  bool bit(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i, bool value);

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  friend bool operator==(const Bitstream&, const Bitstream&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Sign bit plus unipolar magnitude stream.
struct StochasticNumber {
  bool negative = false;
  Bitstream stream;
  ChannelId source_channel;
};

}  // namespace astra::sc
