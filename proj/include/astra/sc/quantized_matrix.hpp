#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "astra/common/matrix.hpp"
#include "astra/sc/types.hpp"

namespace astra::sc {

/// Row-major matrix of sign-magnitude codes sharing one symmetric scale.
/// Codes are stored signed (a zero code is never negative).
struct QuantizedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint32_t magnitude_bits = 8;
  double scale = 1.0;
  std::vector<std::int32_t> codes;

  FixedPointValue at(std::size_t r, std::size_t c) const;
  Matrix dequantize() const;

  /// Per-tensor symmetric quantization with scale = max |value| (1 for an
  /// all-zero matrix).
  static QuantizedMatrix quantize(const Matrix& m, std::uint32_t magnitude_bits);
};

}  // namespace astra::sc
